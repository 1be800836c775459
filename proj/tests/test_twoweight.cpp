#include <doctest.h>

#include <random>

#include "support.hpp"
#include "walpert/synthetic.hpp"
#include "walpert/twoweight.hpp"

using namespace walpert;

namespace {
const Interval kUnit(Rat(0), Rat(1));
const DyadicInterval kRoot = interval_at(kUnit, 0, 0);
}

TEST_CASE("kernel derivatives against finite differences") {
  for (auto variant : {Kernel::Variant::Riesz, Kernel::Variant::HilbertType}) {
    Kernel ker{variant, 0.5, 2, 0.5};
    for (double x : {-1.3, 2.7}) {
      double y = 0.4;
      for (int order = 1; order <= 3; ++order) {
        double h = 1e-6;
        double fd = (ker.deriv_x(order - 1, x + h, y) -
                     ker.deriv_x(order - 1, x - h, y)) /
                    (2 * h);
        CHECK(ker.deriv_x(order, x, y) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("poisson integral") {
  // atom inside J, the standard Poisson kernel bounds
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    Measure m = random_measure(rng, kUnit);
    double mass = m.moment(kUnit, 0);
    double p = poisson(1.0, 0.0, kUnit, m.restrict(kUnit));
    CHECK(p <= mass / 1.0 + 1e-12);
    CHECK(p >= mass / 4.0 - 1e-12);
    // monotone decreasing in the order m
    double prev = poisson(0.5, 0.25, kUnit, m);
    for (double ord : {1.0, 1.5, 2.0, 3.0}) {
      double cur = poisson(ord, 0.25, kUnit, m);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }

  // quadrature oracle on a polynomial-density measure
  Measure poly_m({}, {{Interval(Rat(1, 4), Rat(7, 8)), {Rat(1), Rat(2), Rat(1)}}});
  Interval j(Rat(0), Rat(1, 8));
  for (double ord : {1.0, 2.0}) {
    double closed = poisson(ord, 0.3, j, poly_m);
    double jl = j.length_d(), jc = j.center_d();
    double oracle = testing::integrate(poly_m, kUnit, [&](double y) {
      return std::pow(jl, ord) /
             std::pow(jl + std::abs(y - jc), ord + 1.0 - 0.3);
    }, {jc});
    CHECK(closed == doctest::Approx(oracle).epsilon(1e-9));
  }

  // the lacunary example: delta mass dominates P_1 on I_j
  Measure delta0 = point_mass(Rat(0), Rat(1));
  Interval i4 = example_interval(4);
  double expect = i4.length_d() /
                  std::pow(i4.length_d() + i4.center_d(), 2.0);
  CHECK(poisson(1.0, 0.0, i4, delta0) == doctest::Approx(expect));
}

TEST_CASE("best center") {
  // symmetric measure: the midpoint, for every k
  Measure leb = lebesgue(kUnit);
  for (int k = 1; k <= 3; ++k)
    CHECK(best_center(leb, kUnit, k) == doctest::Approx(0.5).epsilon(1e-12));
  // single atom: the atom (zero attained)
  Measure one = point_mass(Rat(5, 8), Rat(2));
  CHECK(best_center(one, kUnit, 2) == doctest::Approx(0.625).epsilon(1e-12));
  // asymmetric two-atom measure, k=1: the omega-mean
  Measure two({{Rat(1, 8), Rat(1)}, {Rat(3, 4), Rat(3)}}, {});
  CHECK(best_center(two, kUnit, 1) ==
        doctest::Approx((0.125 + 3 * 0.75) / 4.0).epsilon(1e-12));
}

TEST_CASE("k-energy: per-term comparison and DP monotonicity") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    Measure sigma = random_measure(rng, kUnit);
    Measure omega = random_charged_measure(rng, kUnit);
    std::vector<Interval> cells;
    for (int i = 0; i < 4; ++i)
      cells.push_back(Interval(Rat(i, 4), Rat(i + 1, 4)));
    EnergyReport e1 = k_energy(sigma, omega, 0.25, 1, kUnit, cells);
    EnergyReport e2 = k_energy(sigma, omega, 0.25, 2, kUnit, cells);
    EnergyReport e3 = k_energy(sigma, omega, 0.25, 3, kUnit, cells);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CHECK(e1.terms[i].value >= 0.0);
      CHECK(e2.terms[i].value <= e1.terms[i].value + 1e-12);
      CHECK(e3.terms[i].value <= e2.terms[i].value + 1e-12);
    }
    double prev = -1.0;
    for (int depth = 0; depth <= 4; ++depth) {
      EnergyReport dp =
          k_energy_dyadic_sup(sigma, omega, 0.25, 2, kRoot, depth);
      CHECK(dp.total >= prev - 1e-14);
      prev = dp.total;
    }
  }
}

TEST_CASE("muckenhoupt a2") {
  Measure leb = lebesgue(kUnit);
  A2Report r = a2(leb, leb, 0.0, kUnit, 4);
  CHECK(r.value == doctest::Approx(1.0));
  for (const auto& [q, ratio] : r.rows) CHECK(ratio == doctest::Approx(1.0));
}

TEST_CASE("lacunary example table") {
  double eps = 0.1;
  auto rows = example_energy_table(eps, 12, 2);
  REQUIRE(rows.size() == 11);
  for (const auto& r : rows) {
    // |I_j|_sigma = j^{-1-eps}, |I_j|_omega = 4^{-2j}, A2 ratio = j^{-eps}
    CHECK(r.sigma_mass ==
          doctest::Approx(std::pow(r.j, -1.0 - eps)).epsilon(1e-12));
    CHECK(r.omega_mass ==
          doctest::Approx(std::pow(4.0, -2.0 * r.j)).epsilon(1e-12));
    CHECK(r.a2_ratio == doctest::Approx(std::pow(r.j, -eps)).epsilon(1e-12));
    CHECK(r.term_1 > 0.0);
    CHECK(r.term_k > 0.0);
  }
  // A2 on the containing intervals [0, 4^-j) stays bounded in j
  Measure sigma = example_sigma(eps, 12);
  Measure omega = example_omega(12);
  for (int j = 2; j <= 6; ++j) {
    Interval kj(Rat(0), rat_pow2(-2 * j));
    double ratio = sigma.moment(kj, 0) * omega.moment(kj, 0) /
                   std::pow(kj.length_d(), 2.0);
    CHECK(ratio > 0.2);
    CHECK(ratio < 5.0);
  }
}

TEST_CASE("phi/psi: closed forms, cancellation, decay") {
  std::mt19937_64 rng(71);
  Measure omega = random_charged_measure(rng, kUnit);
  Kernel ker{Kernel::Variant::Riesz, 0.5, 1, 0.5};

  // atom: the phi factor is the plain kernel derivative
  Measure nu = point_mass(Rat(3), Rat(2));
  auto [phi, psi] = phi_psi(kRoot, nu, omega, ker, 1);
  double m = best_center(omega, kUnit, 1);
  auto [funcs, rep] = build_alpert(omega, kRoot, 1);
  double dxk = testing::integrate(
      omega, kUnit, [&](double x) { return x * funcs[0].eval(x); }, {0.5});
  CHECK(phi == doctest::Approx(std::abs(2.0 * ker.deriv_x(1, m, 3.0)) *
                               std::abs(dxk))
                   .epsilon(1e-9));
  CHECK(psi > 0.0);

  // canceling pair kills phi
  double d1 = ker.deriv_x(1, m, 3.0), d2 = ker.deriv_x(1, m, 5.0);
  Measure signed_nu({{Rat(3), Rat(1)}, {Rat(5), Rat(-d1 / d2)}}, {});
  auto [phi0, psi0] = phi_psi(kRoot, signed_nu, omega, ker, 1);
  CHECK(phi0 == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(psi0 > 0.0);

  // psi/phi decays like (d/|J|)^{-delta} as the atom recedes
  double r16 = 0.0, r256 = 0.0;
  {
    auto [p1, s1] = phi_psi(kRoot, point_mass(Rat(16), Rat(1)), omega, ker, 1);
    auto [p2, s2] = phi_psi(kRoot, point_mass(Rat(256), Rat(1)), omega, ker, 1);
    r16 = s1 / p1;
    r256 = s2 / p2;
  }
  CHECK(r16 / r256 == doctest::Approx(4.0).epsilon(0.15));

  // support violation is rejected
  CHECK_THROWS(phi_psi(kRoot, point_mass(Rat(1, 2), Rat(1)), omega, ker, 1));
}

TEST_CASE("op_coefficient against the quadrature oracle") {
  std::mt19937_64 rng(73);
  Measure omega = random_charged_measure(rng, kUnit);
  Kernel ker{Kernel::Variant::Riesz, 0.5, 2, 0.5};
  auto [funcs, rep] = build_alpert(omega, kRoot, 2);
  Measure nu = point_mass(Rat(3), Rat(1));
  for (const AlpertFunction& h : funcs) {
    double oracle = testing::integrate(
        omega, kUnit, [&](double x) { return ker.value(x, 3.0) * h.eval(x); },
        {0.5});
    CHECK(op_coefficient(ker, nu, h, omega) ==
          doctest::Approx(oracle).epsilon(1e-9));
  }
  // piecewise-density nu through the adaptive outer integral
  Measure nu2({}, {{Interval(Rat(2), Rat(3)), {Rat(1), Rat(1, 2)}}});
  double closed = op_coefficient(ker, nu2, funcs[0], omega);
  double oracle = testing::simpson(
      [&](double y) {
        return (1.0 + 0.5 * y) *
               testing::integrate(
                   omega, kUnit,
                   [&](double x) { return ker.value(x, y) * funcs[0].eval(x); },
                   {0.5});
      },
      2.0, 3.0);
  CHECK(closed == doctest::Approx(oracle).epsilon(1e-8));
  // singular configuration rejected
  CHECK_THROWS(op_coefficient(ker, point_mass(Rat(1, 2), Rat(1)), funcs[0],
                              omega));
}

TEST_CASE("dyadic test operator") {
  Measure leb = lebesgue(kUnit);

  // full coupling: one sigma-basis function maps to the pair sum
  TestOperator full(leb, leb, kUnit, 3, Coupling::Full);
  DyadicInterval q0 = interval_at(kUnit, 1, 0);
  PiecewiseFunction f(kUnit, 2);
  f.add_alpert(full.sigma_basis(q0)[0], 1.0);
  PiecewiseFunction tf = full.apply(f);
  PiecewiseFunction expect(kUnit, 2);
  expect.add_alpert(full.omega_basis(q0)[0], 1.0);
  expect.add_alpert(full.omega_basis(q0)[1], 1.0);
  PiecewiseFunction diff = tf;
  diff.add_scaled(expect, -1.0);
  CHECK(norm2(diff, leb) < 1e-18);

  // global degree-<=1 polynomials are annihilated (moment conditions)
  PiecewiseFunction lin(kUnit, 0);
  lin.cell(0) = Poly<double>{0.25, 1.0};
  CHECK(norm2(full.apply(lin.refined(2)), leb) < 1e-18);

  // operator norm bound for the full coupling: ||Tf||^2 <= 4 ||f||^2
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    Measure sigma = random_measure(rng, kUnit);
    Measure omega = random_charged_measure(rng, kUnit);
    TestOperator t(sigma, omega, kUnit, 4, Coupling::Full);
    PiecewiseFunction g = random_piecewise(rng, kUnit, 4, 1);
    CHECK(norm2(t.apply(g), omega) <= 4.0 * norm2(g, sigma) + 1e-9);
  }
}

TEST_CASE("testing check: diagonal passes where full coupling provably fails") {
  Measure leb = lebesgue(kUnit);
  DyadicInterval q = interval_at(kUnit, 2, 1);  // [1/4, 1/2)
  Poly<double> p{0.5, -1.0};                    // 1/2 - x

  TestOperator full(leb, leb, kUnit, 6, Coupling::Full);
  TestingCheck cf = testing_check(full, q, p);
  CHECK(cf.rhs == doctest::Approx(1.0 / 192.0));
  // exact value of the full-coupling quadratic form on this input
  CHECK(cf.lhs ==
        doctest::Approx(37.0 * std::sqrt(3.0) / 24576.0 + 41.0 / 6144.0));
  CHECK_FALSE(cf.pass);

  TestOperator diag(leb, leb, kUnit, 6, Coupling::Diagonal);
  TestingCheck cd = testing_check(diag, q, p);
  CHECK(cd.pass);

  // p = 0: both sides vanish
  TestingCheck zero = testing_check(diag, q, Poly<double>{0.0, 0.0});
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.pass);

  // Q = root: nothing strictly above it in the grid
  TestingCheck root_check = testing_check(diag, kRoot, Poly<double>{1.0, 0.5});
  CHECK(root_check.lhs <= 1e-16);
  CHECK(root_check.pass);
}

TEST_CASE("testing check over random pairs, diagonal coupling") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 5; ++trial) {
    Measure sigma = random_measure(rng, kUnit);
    Measure omega = random_measure(rng, kUnit);
    TestOperator t(sigma, omega, kUnit, 4, Coupling::Diagonal);
    for (const DyadicInterval& q : descendants(kUnit, 3)) {
      Poly<double> p{random_rat(rng, -2.0, 2.0), random_rat(rng, -2.0, 2.0)};
      TestingCheck c = testing_check(t, q, p);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("subgrid separation condition") {
  // the [0, 4^-j) chain hugs the origin: admitted
  std::vector<DyadicInterval> chain;
  for (int j = 1; j <= 5; ++j) chain.push_back(interval_at(kUnit, 2 * j, 0));
  CHECK(subgrid_check(chain).ok);

  // sibling pairs overlap after dilation without containment
  std::vector<DyadicInterval> siblings{interval_at(kUnit, 1, 0),
                                       interval_at(kUnit, 1, 1)};
  SubgridReport bad = subgrid_check(siblings);
  CHECK_FALSE(bad.ok);
  CHECK(!bad.violations.empty());

  // singleton: vacuous
  std::vector<DyadicInterval> lone{interval_at(kUnit, 3, 5)};
  CHECK(subgrid_check(lone).ok);
}
