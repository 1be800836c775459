#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "walpert/moments.hpp"

namespace walpert {

// Multi-index over n <= 3 axes.
using MultiIndex = std::array<int, 3>;

// Monomials t^alpha with |alpha| <= k-1, graded-lex order; size A_{k,n}.
std::vector<MultiIndex> monomial_indices(int n, int k);

// Generator 1_{child} t^alpha in the Q-local coordinates; `child` indexes the
// 2^n coordinate-wise child combinations of Q.
struct Generator {
  int child;
  MultiIndex alpha;
};

// Measures on R^n for n in {2,3}: atoms plus constant-density boxes, so all
// moments stay products of one-dimensional closed forms.
struct BoxMeasure {
  int n = 2;
  struct AtomN {
    std::array<Rat, 3> x;
    Rat mass;
  };
  struct BoxPiece {
    std::array<Interval, 3> box;
    Rat density;
  };
  std::vector<AtomN> atoms;
  std::vector<BoxPiece> boxes;
};

// Orthonormal basis of the detail space L^2_{Q;k}(mu): per-function, per-child
// polynomial coefficient tables over the monomial set, in Q-local coordinates.
struct DetailSpaceBasis {
  int n = 1;
  int k = 1;
  int n_children = 2;
  double gram_rank_cutoff = 0.0;
  std::vector<MultiIndex> monomials;
  // functions[f][child * monomials.size() + m] = coefficient
  std::vector<Eigen::VectorXd> functions;

  int count() const { return int(functions.size()); }
};

// Moment callback: ∫_{child} t^alpha dμ in Q-local coordinates, for
// |alpha| <= 2(k-1).  Both front ends reduce to this.
using ChildMomentFn = std::function<double(int child, const MultiIndex&)>;

std::vector<Generator> generators(const Measure& mu, const DyadicInterval& Q,
                                  int k);
std::vector<Generator> generators(const BoxMeasure& mu, const DyadicCube& Q,
                                  int k);

DetailSpaceBasis gram_basis(const Measure& mu, const DyadicInterval& Q, int k,
                            double tol = 1e-10);
DetailSpaceBasis gram_basis(const BoxMeasure& mu, const DyadicCube& Q, int k,
                            double tol = 1e-10);
DetailSpaceBasis gram_basis_from(int n, int k, const ChildMomentFn& mom,
                                 double tol);

// The bilinear form of the projection onto the detail space, restricted to
// the generator span and written in the fixed generator coordinates
// (child-major, then monomial): B_pq = <g_p, Δ g_q>_mu.  Independent of the
// orthonormal basis chosen, so forms from different constructions can be
// compared entrywise.
Eigen::MatrixXd projection_form(const Measure& mu, const DyadicInterval& Q,
                                const DetailSpaceBasis& basis);
Eigen::MatrixXd projection_form_from(int n, int k, const ChildMomentFn& mom,
                                     const DetailSpaceBasis& basis);

// Gram matrix of the generators themselves (used for the idempotence check
// B G^+ B = B).
Eigen::MatrixXd generator_gram(int n, int k, const ChildMomentFn& mom);

ChildMomentFn child_moments(const Measure& mu, const DyadicInterval& Q);
ChildMomentFn child_moments(const BoxMeasure& mu, const DyadicCube& Q);

}  // namespace walpert
