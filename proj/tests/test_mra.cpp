#include <doctest.h>

#include <random>

#include "support.hpp"
#include "walpert/synthetic.hpp"
#include "walpert/twoweight.hpp"

using namespace walpert;

namespace {
const Interval kUnit(Rat(0), Rat(1));
const DyadicInterval kRoot = interval_at(kUnit, 0, 0);

PiecewiseFunction monomial(const Interval& root, int depth, int power) {
  PiecewiseFunction f(root, 0);
  Poly<double> x{root.center_d(), root.length_d()};  // x in root-local coords
  Poly<double> p{1.0};
  for (int i = 0; i < power; ++i) p = poly_mul(p, x);
  f.cell(0) = p;
  return f.refined(depth);
}

}  // namespace

TEST_CASE("piecewise function plumbing") {
  PiecewiseFunction f = monomial(kUnit, 3, 2);
  CHECK(f.eval(0.3) == doctest::Approx(0.09));
  PiecewiseFunction g = f.refined(5);
  CHECK(g.eval(0.77) == doctest::Approx(0.77 * 0.77));

  f.add_scaled(g, 2.0);  // 3 x^2
  CHECK(f.eval(0.5) == doctest::Approx(0.75));

  // atom overrides survive arithmetic
  PiecewiseFunction h(kUnit, 1);
  h.set_atom_value(Rat(1, 2), 7.0);
  h.add_scaled(monomial(kUnit, 1, 1), 1.0);
  CHECK(h.value_at(Rat(1, 2)) == doctest::Approx(7.5));
  CHECK(h.eval(0.5) == doctest::Approx(0.5));
}

TEST_CASE("inner products against the quadrature oracle") {
  std::mt19937_64 rng(41);
  Measure m = random_measure(rng, kUnit);
  PiecewiseFunction f = random_piecewise(rng, kUnit, 3, 2);
  PiecewiseFunction g = random_piecewise(rng, kUnit, 2, 1);
  std::vector<double> breaks;
  for (int i = 1; i < 8; ++i) breaks.push_back(i / 8.0);
  double oracle = testing::integrate(
      m, kUnit, [&](double x) { return f.eval(x) * g.eval(x); }, breaks);
  CHECK(inner(f, g, m) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("e_projection: spec cases") {
  Measure leb = lebesgue(kUnit);
  PiecewiseFunction x = monomial(kUnit, 2, 1);

  // mean value of x with k=1
  Poly<double> c0 = e_projection(x, leb, kRoot, 1);
  CHECK(c0[0] == doctest::Approx(0.5));

  // x reproduced exactly with k=2 (root-local coords: 1/2 + t)
  Poly<double> c1 = e_projection(x, leb, kRoot, 2);
  CHECK(c1[0] == doctest::Approx(0.5));
  CHECK(c1[1] == doctest::Approx(1.0));

  // x^2 projects to x - 1/6: local form (1/3) + t
  PiecewiseFunction x2 = monomial(kUnit, 2, 2);
  Poly<double> c2 = e_projection(x2, leb, kRoot, 2);
  CHECK(c2[0] == doctest::Approx(1.0 / 3.0));
  CHECK(c2[1] == doctest::Approx(1.0));

  // uncharged interval: zero polynomial
  Measure left_only = lebesgue(Interval(Rat(0), Rat(1, 2)));
  Poly<double> cz = e_projection(x, left_only, interval_at(kUnit, 1, 1), 2);
  CHECK(std::abs(cz[0]) + std::abs(cz[1]) < 1e-14);
}

TEST_CASE("delta_projection: dual routes agree") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    Measure m = random_measure(rng, kUnit);
    PiecewiseFunction f = random_piecewise(rng, kUnit, 4, 2);
    int depth = int(rng() % 3);
    DyadicInterval q =
        interval_at(kUnit, depth, rng() % (std::uint64_t(1) << depth));
    int k = 1 + int(rng() % 3);
    DeltaResult d = delta_projection(f, m, q, k);
    CHECK(d.dual_route_residual < 1e-9);
  }

  // constants and degree <= k-1 polynomials are annihilated
  Measure leb = lebesgue(kUnit);
  PiecewiseFunction one = monomial(kUnit, 2, 0);
  CHECK(norm2(delta_projection(one, leb, kRoot, 1).detail, leb) < 1e-20);
  PiecewiseFunction x = monomial(kUnit, 2, 1);
  CHECK(norm2(delta_projection(x, leb, kRoot, 2).detail, leb) < 1e-20);
  // x^2 is genuinely split by k=2
  PiecewiseFunction x2 = monomial(kUnit, 2, 2);
  CHECK(norm2(delta_projection(x2, leb, kRoot, 2).detail, leb) > 1e-6);
}

TEST_CASE("expand/reconstruct round trip and Parseval") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    Measure m = random_measure(rng, kUnit);
    int k = 1 + int(rng() % 3);
    int depth = 2 + int(rng() % 3);
    PiecewiseFunction f = random_piecewise(rng, kUnit, depth, k - 1);
    WaveletExpansion e = expand(f, m, kUnit, depth, k);
    PiecewiseFunction g = reconstruct(e, m);
    PiecewiseFunction diff = g;
    diff.add_scaled(f, -1.0);
    double nf = norm2(f, m);
    CHECK(norm2(diff, m) <= 1e-20 * std::max(1.0, nf) + 1e-18);
    // Parseval
    CHECK(expansion_norm2(e, m) == doctest::Approx(nf).epsilon(1e-8));
  }
}

TEST_CASE("expansion of a single detail function is one coefficient") {
  Measure leb = lebesgue(kUnit);
  DyadicInterval q = interval_at(kUnit, 2, 1);
  auto [funcs, rep] = build_alpert(leb, q, 2);
  PiecewiseFunction f(kUnit, 3);
  f.add_alpert(funcs[1], 1.0);
  WaveletExpansion e = expand(f, leb, kUnit, 3, 2);
  for (const auto& [key, coefs] : e.details) {
    for (std::size_t i = 0; i < coefs.size(); ++i) {
      double expect =
          (key == std::make_pair(2, std::uint64_t(1)) && i == 1) ? 1.0 : 0.0;
      CHECK(coefs[i] == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  for (double c : e.coarse) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("k=1 expansion coefficients equal the classical Haar pairing") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    Measure m = random_charged_measure(rng, kUnit);
    PiecewiseFunction f = random_piecewise(rng, kUnit, 3, 0);
    WaveletExpansion e = expand(f, m, kUnit, 3, 1);
    for (const auto& [key, coefs] : e.details) {
      DyadicInterval q{kUnit, key.first, key.second};
      auto h = haar(m, q);
      REQUIRE(h.has_value());
      REQUIRE(coefs.size() == 1);
      CHECK(coefs[0] == doctest::Approx(inner(f, *h, m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("telescoping identities") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    Measure m = random_measure(rng, kUnit);
    PiecewiseFunction f = random_piecewise(rng, kUnit, 5, 2);
    int kd = 2 + int(rng() % 4);  // depth of K
    DyadicInterval K =
        interval_at(kUnit, kd, rng() % (std::uint64_t(1) << kd));
    int ld = int(rng() % kd);  // strictly shallower Lc containing K
    DyadicInterval Lc = K;
    while (Lc.depth > ld) Lc = Lc.parent();
    int k = 1 + int(rng() % 3);
    CHECK(check_telescoping(f, m, K, Lc, k) < 1e-9);
  }

  // depth gap 5 with a cubic, and a measure with uncharged patches
  Measure holes({{Rat(1, 32), Rat(2)}},
                {{Interval(Rat(1, 2), Rat(1)), {Rat(1)}}});
  PiecewiseFunction x3 = [] {
    PiecewiseFunction f(kUnit, 0);
    f.cell(0) = Poly<double>{0.0, 0.0, 0.0, 1.0};
    return f.refined(5);
  }();
  DyadicInterval K = interval_at(kUnit, 5, 31);
  CHECK(check_telescoping(x3, holes, K, kRoot, 2) < 1e-9);
}
