#pragma once

// Test-only oracles, deliberately independent of the library's closed-form
// integration paths: measure integrals are done by adaptive Simpson on the
// density pieces plus explicit atom sums.

#include <cmath>
#include <functional>

#include "walpert/measure.hpp"

namespace walpert::testing {

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int depth = 20, double tol = 1e-12) {
  struct R {
    static double go(const std::function<double(double)>& f, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
      double m = 0.5 * (a + b);
      double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
      double left = (m - a) / 6 * (fa + 4 * flm + fm);
      double right = (b - m) / 6 * (fm + 4 * frm + fb);
      double d = left + right - whole;
      if (depth <= 0 || std::abs(d) <= 15 * tol)
        return left + right + d / 15;
      return go(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
             go(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
    }
  };
  // endpoints are sampled just inside: integrands here are often one-sided
  // limits of piecewise definitions, and the measure of the nudge is ~1e-13
  double a_in = a + (b - a) * 1e-13, b_in = b - (b - a) * 1e-13;
  double fa = f(a_in), fb = f(b_in), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return R::go(f, a, b, fa, fm, fb, whole,
               tol * (std::abs(whole) + 1.0), depth);
}

// ∫_J f dμ with f given pointwise; piecewise-smooth f should be integrated
// piece by piece by the caller when its kinks do not align with mu's pieces.
inline double integrate(const Measure& mu, const Interval& J,
                        const std::function<double(double)>& f,
                        const std::vector<double>& extra_breaks = {}) {
  double tot = 0.0;
  for (const auto& a : mu.atoms_in(J))
    tot += to_double(a.mass) * f(to_double(a.x));
  for (const auto& piece : mu.pieces()) {
    Interval clip = piece.span.intersect(J);
    if (clip.empty()) continue;
    Poly<double> dens(piece.density.size());
    for (std::size_t r = 0; r < dens.size(); ++r)
      dens[r] = to_double(piece.density[r]);
    std::vector<double> cuts{clip.a_d(), clip.b_d()};
    for (double x : extra_breaks)
      if (x > cuts.front() && x < cuts.back()) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      tot += simpson([&](double x) { return f(x) * poly_eval(dens, x); },
                     cuts[i], cuts[i + 1]);
  }
  return tot;
}

}  // namespace walpert::testing
