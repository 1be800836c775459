#pragma once

#include <map>
#include <span>
#include <vector>

#include "walpert/basis.hpp"

namespace walpert {

// Piecewise polynomial on the dyadic cells of depth D over a root interval,
// plus explicit values at atom locations.  The atom table exists because
// L^2(mu) classes are only determined up to mu-null sets: a function may
// disagree with its polynomial part exactly on atoms.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;
  PiecewiseFunction(Interval root, int depth)
      : root_(std::move(root)), depth_(depth),
        cells_(std::size_t(1) << depth) {}

  const Interval& root() const { return root_; }
  int depth() const { return depth_; }
  const Poly<double>& cell(std::uint64_t j) const { return cells_[j]; }
  Poly<double>& cell(std::uint64_t j) { return cells_[j]; }
  std::uint64_t cell_count() const { return cells_.size(); }

  Interval cell_interval(std::uint64_t j) const;
  // polynomial value (cell-local Horner); atom overrides not consulted
  double eval(double x) const;
  // value as an L^2(mu) representative: override at atoms when present
  double value_at(const Rat& x) const;
  void set_atom_value(const Rat& x, double v);
  const std::vector<std::pair<Rat, double>>& atom_overrides() const {
    return atom_values_;
  }

  PiecewiseFunction refined(int new_depth) const;
  void add_scaled(const PiecewiseFunction& g, double s);
  void add_alpert(const AlpertFunction& h, double s);
  // p is a polynomial in Q-local coordinates, added on Q only
  void add_poly_on(const DyadicInterval& Q, const Poly<double>& p, double s);
  void scale(double s);

 private:
  Interval root_;
  int depth_ = 0;
  std::vector<Poly<double>> cells_;
  std::vector<std::pair<Rat, double>> atom_values_;
};

// ∫_Q f(x) p(t_Q(x)) dμ, honoring f's atom overrides.
double integral_against(const PiecewiseFunction& f, const Measure& mu,
                        const DyadicInterval& Q, const Poly<double>& p);
double inner(const PiecewiseFunction& f, const PiecewiseFunction& g,
             const Measure& mu);
double inner(const PiecewiseFunction& f, const AlpertFunction& h,
             const Measure& mu);
double norm2(const PiecewiseFunction& f, const Measure& mu);

// Best L^2(1_Q mu) polynomial of degree <= k-1 on Q, coefficients in Q-local
// coordinates; rank-truncated normal equations.
Poly<double> e_projection(const PiecewiseFunction& f, const Measure& mu,
                          const DyadicInterval& Q, int k);

// Projection onto the detail space, computed both from the orthonormal basis
// and as (sum of child E's) - (parent E); the residual between the two routes
// is reported alongside.
struct DeltaResult {
  PiecewiseFunction detail;
  double dual_route_residual = 0.0;
};
DeltaResult delta_projection(const PiecewiseFunction& f, const Measure& mu,
                             const DyadicInterval& Q, int k);

struct WaveletExpansion {
  Interval root;
  int k = 1;
  int depth = 0;
  Poly<double> coarse;  // E_{root;k} f in root-local coordinates
  std::map<std::pair<int, std::uint64_t>, std::vector<double>> details;

  double detail_energy() const;
};

WaveletExpansion expand(const PiecewiseFunction& f, const Measure& mu,
                        const Interval& root, int depth, int k);
PiecewiseFunction reconstruct(const WaveletExpansion& e, const Measure& mu);

// ‖coarse‖^2_{L^2(mu)} + Σ |detail coefficients|^2
double expansion_norm2(const WaveletExpansion& e, const Measure& mu);

// max over sample points (atoms of mu in K, Chebyshev nodes per finest cell)
// of | Σ_{K ⊊ I ⊆ Lc} Δ_I f  -  (E_K f - E_Lc f) |.
double check_telescoping(const PiecewiseFunction& f, const Measure& mu,
                         const DyadicInterval& K, const DyadicInterval& Lc,
                         int k);

}  // namespace walpert
