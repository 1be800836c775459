#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "walpert/interval.hpp"
#include "walpert/poly.hpp"

namespace walpert {

enum class Arithmetic { Exact, Float };

// A locally finite positive Borel measure given by finitely many atoms plus
// piecewise-polynomial density pieces on half-open intervals.  All data is
// kept as exact rationals; `mode` selects which arithmetic the moment
// accessors use.  Exact mode falls through to float (once, stickily) when a
// moment exceeds the bit budget.
//
// The type is algebraic: nothing stops negative masses or sign-changing
// densities, which validate() reports.  The two-weight diagnostics use that
// freedom for signed measures.
class Measure {
 public:
  struct Atom {
    Rat x;
    Rat mass;
  };
  struct Piece {
    Interval span;
    Poly<Rat> density;  // ascending coefficients in the raw x coordinate
  };

  Measure() = default;
  Measure(std::vector<Atom> atoms, std::vector<Piece> pieces,
          Arithmetic mode = Arithmetic::Exact, int bit_budget = 4096);
  Measure(const Measure& o);
  Measure& operator=(const Measure& o);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  Arithmetic mode() const { return mode_; }
  int bit_budget() const { return bit_budget_; }
  bool overflowed() const { return overflowed_.load(); }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }

  // Invariant report; empty iff the measure is a valid positive measure.
  std::vector<std::string> validate() const;

  // ∫_J x^i dμ
  double moment(const Interval& J, int i) const;
  // ∫_J t^i dμ with t the `frame`-local coordinate t = (x - c)/|frame|
  double local_moment(const Interval& J, int i) const;
  double local_moment_in(const Interval& J, const Interval& frame, int i) const;
  // density-only variant; atoms handled by the caller (used where atom values
  // of a function can differ from its polynomial values)
  double piece_local_moment_in(const Interval& J, const Interval& frame,
                               int i) const;

  // Exact counterparts.  Throw ExactOverflow past the bit budget; available
  // regardless of mode() since the data is rational either way.
  Rat moment_exact(const Interval& J, int i) const;
  Rat local_moment_exact_in(const Interval& J, const Interval& frame,
                            int i) const;

  Measure restrict(const Interval& J) const;
  double total_mass() const;

  std::vector<Atom> atoms_in(const Interval& J) const;

 private:
  bool use_exact() const {
    return mode_ == Arithmetic::Exact && !overflowed_.load();
  }
  Rat guard(Rat v) const;

  std::vector<Atom> atoms_;
  std::vector<Piece> pieces_;
  Arithmetic mode_ = Arithmetic::Exact;
  int bit_budget_ = 4096;
  mutable std::atomic<bool> overflowed_{false};
  mutable std::atomic<bool> warned_{false};
};

// Convenience builders.
Measure lebesgue(const Interval& span);
Measure point_mass(const Rat& x, const Rat& mass);

}  // namespace walpert
