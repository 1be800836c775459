#pragma once

#include <string>

#include "walpert/rational.hpp"

namespace walpert {

// Half-open interval [a, b).  Membership is a <= x < b throughout; an atom
// sitting on a shared endpoint belongs to the interval on its right.
struct Interval {
  Rat a{0};
  Rat b{0};

  Interval() = default;
  Interval(Rat lo, Rat hi) : a(std::move(lo)), b(std::move(hi)) {}
  Interval(double lo, double hi) : a(lo), b(hi) {}

  Rat length() const { return b - a; }
  Rat center() const { return (a + b) / 2; }
  double length_d() const { return to_double(length()); }
  double center_d() const { return to_double(center()); }
  double a_d() const { return to_double(a); }
  double b_d() const { return to_double(b); }

  bool empty() const { return a >= b; }
  bool contains(const Rat& x) const { return a <= x && x < b; }
  bool contains(const Interval& j) const { return a <= j.a && j.b <= b; }

  Interval intersect(const Interval& o) const {
    Rat lo = a > o.a ? a : o.a;
    Rat hi = b < o.b ? b : o.b;
    if (lo >= hi) return Interval(Rat(0), Rat(0));
    return Interval(lo, hi);
  }

  bool operator==(const Interval& o) const { return a == o.a && b == o.b; }

  std::string str() const;
};

}  // namespace walpert
