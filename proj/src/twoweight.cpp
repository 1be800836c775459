#include "walpert/twoweight.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace walpert {

namespace {

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

Poly<double> to_dense(const Poly<Rat>& p) {
  Poly<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = to_double(p[i]);
  return q;
}

// ∫_A^B v^p q(v) dv for 0 < A <= B, real exponent p; log term when an
// exponent hits -1.
double power_poly_integral(double p, const Poly<double>& q, double A,
                           double B) {
  Kahan acc;
  for (std::size_t r = 0; r < q.size(); ++r) {
    if (q[r] == 0.0) continue;
    double e = p + double(r);
    if (std::abs(e + 1.0) < 1e-12)
      acc.add(q[r] * std::log(B / A));
    else
      acc.add(q[r] * (std::pow(B, e + 1.0) - std::pow(A, e + 1.0)) / (e + 1.0));
  }
  return acc.s;
}

// ∫ q(y) (h + |y - c|)^{-p} dy over [a, b], splitting at c.
double poisson_piece(double p, double h, double c, const Poly<double>& q,
                     double a, double b) {
  Kahan acc;
  // y < c: u = c - y in [max(0, c-b), c-a], y = c - u, dy = -du
  if (a < c) {
    double u1 = std::max(0.0, c - std::min(b, c));
    double u2 = c - a;
    if (u2 > u1) {
      Poly<double> qu = poly_affine_arg(q, c, -1.0);     // q(c - u)
      Poly<double> qv = poly_affine_arg(qu, -h, 1.0);    // in v = h + u
      acc.add(power_poly_integral(-p, qv, h + u1, h + u2));
    }
  }
  // y >= c: u = y - c in [max(0, a-c), b-c]
  if (b > c) {
    double u1 = std::max(0.0, std::max(a, c) - c);
    double u2 = b - c;
    if (u2 > u1) {
      Poly<double> qu = poly_affine_arg(q, c, 1.0);      // q(c + u)
      Poly<double> qv = poly_affine_arg(qu, -h, 1.0);
      acc.add(power_poly_integral(-p, qv, h + u1, h + u2));
    }
  }
  return acc.s;
}

// ∫ q(y) |y - m|^p sgn(y - m)^parity dy over [a, b] with m outside (a, b).
double kernel_piece(double p, int parity, double m, const Poly<double>& q,
                    double a, double b) {
  if (a >= b) return 0.0;
  if (b <= m) {
    // u = m - y in [m-b, m-a], sgn(y-m) = -1
    Poly<double> qu = poly_affine_arg(q, m, -1.0);
    double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    return sign * power_poly_integral(p, qu, m - b, m - a);
  }
  if (a >= m) {
    Poly<double> qu = poly_affine_arg(q, m, 1.0);
    return power_poly_integral(p, qu, a - m, b - m);
  }
  throw std::invalid_argument("kernel_piece: singularity inside the range");
}

double falling_alpha(double alpha, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c *= (alpha - double(i));
  return c;
}

// adaptive Simpson on a smooth integrand
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, int max_depth = 48) {
  struct Rec {
    static double run(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb, double whole,
                      double tol, int depth) {
      double m = 0.5 * (a + b);
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return run(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             run(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double scale = std::abs(whole) + 1e-300;
  return Rec::run(f, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth);
}

}  // namespace

double Kernel::deriv_x(int order, double x, double y) const {
  double d = x - y;
  double ad = std::abs(d);
  if (ad == 0.0) throw std::domain_error("kernel evaluated on the diagonal");
  double mag = falling_alpha(alpha, order) * std::pow(ad, alpha - 1.0 - order);
  int parity = order + (variant == Variant::HilbertType ? 1 : 0);
  double sign = (parity % 2 == 0 || d > 0) ? 1.0 : -1.0;
  return c_cz * sign * mag;
}

double poisson(double m_order, double alpha, const Interval& J,
               const Measure& mu) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw std::invalid_argument("poisson: need 0 <= alpha < 1");
  double h = J.length_d();
  double c = J.center_d();
  double p = m_order + 1.0 - alpha;
  double hm = std::pow(h, m_order);
  Kahan acc;
  for (const auto& a : mu.atoms())
    acc.add(to_double(a.mass) * hm /
            std::pow(h + std::abs(to_double(a.x) - c), p));
  for (const auto& piece : mu.pieces())
    acc.add(hm * poisson_piece(p, h, c, to_dense(piece.density),
                               piece.span.a_d(), piece.span.b_d()));
  return acc.s;
}

double best_center(const Measure& omega, const Interval& J, int k) {
  if (omega.moment(J, 0) <= 0.0)
    throw std::invalid_argument("best_center: J carries no omega mass");
  // g(s) = ∫ (t - s)^{2k} d omega in J-local coordinates; minimize on
  // [-1/2, 1/2], exactly: the derivative's roots are isolated over Q.
  int n = 2 * k;
  std::vector<Rat> mom(std::size_t(n) + 1);
  for (int i = 0; i <= n; ++i)
    mom[std::size_t(i)] = omega.local_moment_exact_in(J, J, i);
  Poly<Rat> g(std::size_t(n) + 1, Rat(0));
  Rat binom(1);
  for (int r = 0; r <= n; ++r) {
    // binom(2k, r) (-1)^r m_{2k-r} s^r
    Rat term = binom * mom[std::size_t(n - r)];
    g[std::size_t(r)] = (r % 2 == 0) ? term : -term;
    binom = binom * Rat(n - r) / Rat(r + 1);
  }
  Poly<Rat> dg = poly_derivative(g);
  Rat half(1, 2);
  std::vector<Rat> candidates{-half, half};
  for (auto& [lo, hi] : isolate_roots(dg, -half, half)) {
    auto ref = refine_bracket(dg, lo, hi, Rat(1, 1000000000000L));
    candidates.push_back((ref.first + ref.second) / 2);
  }
  Rat best = candidates.front();
  Rat best_val = poly_eval(g, best);
  for (const Rat& s : candidates) {
    Rat v = poly_eval(g, s);
    if (v < best_val) {
      best_val = v;
      best = s;
    }
  }
  return J.center_d() + to_double(best) * J.length_d();
}

namespace {

// ∫ ((x - m)/|cell|)^{2k} d omega over the cell, via local moments about the
// best center expressed in cell-local coordinates.
double scaled_center_norm2(const Measure& omega, const Interval& cell,
                           double m, int k) {
  double s = (m - cell.center_d()) / cell.length_d();
  // ∫ (t - s)^{2k} d omega
  int n = 2 * k;
  double acc = 0.0;
  double binom = 1.0;
  for (int r = 0; r <= n; ++r) {
    double term = binom * std::pow(-s, r) *
                  omega.local_moment_in(cell, cell, n - r);
    acc += term;
    binom = binom * double(n - r) / double(r + 1);
  }
  return acc;
}

EnergyTerm energy_term(const Measure& sigma_in_i, const Measure& omega,
                       double alpha, int k, const Interval& cell) {
  EnergyTerm t;
  t.cell = cell;
  t.poisson_k = poisson(double(k), alpha, cell, sigma_in_i);
  if (omega.moment(cell, 0) > 0.0) {
    t.center = best_center(omega, cell, k);
    t.norm2 = scaled_center_norm2(omega, cell, t.center, k);
  } else {
    t.center = cell.center_d();
    t.norm2 = 0.0;
  }
  t.value = t.poisson_k * t.poisson_k * t.norm2;
  return t;
}

}  // namespace

EnergyReport k_energy(const Measure& sigma, const Measure& omega, double alpha,
                      int k, const Interval& I,
                      std::span<const Interval> partition) {
  EnergyReport rep;
  rep.k = k;
  rep.alpha = alpha;
  rep.I = I;
  rep.sigma_mass = sigma.moment(I, 0);
  Measure sig_i = sigma.restrict(I);
  Kahan acc;
  for (const Interval& cell : partition) {
    rep.terms.push_back(energy_term(sig_i, omega, alpha, k, cell));
    acc.add(rep.terms.back().value);
  }
  rep.total = rep.sigma_mass > 0 ? acc.s / rep.sigma_mass : 0.0;
  rep.partition = "explicit (" + std::to_string(partition.size()) + " cells)";
  return rep;
}

EnergyReport k_energy_dyadic_sup(const Measure& sigma, const Measure& omega,
                                 double alpha, int k, const DyadicInterval& I,
                                 int depth) {
  Interval iv = I.realize();
  Measure sig_i = sigma.restrict(iv);
  // bottom-up: best(cell) = max(term(cell), sum of children's best)
  std::vector<std::vector<double>> best(std::size_t(depth) + 1);
  std::vector<std::vector<char>> split(std::size_t(depth) + 1);
  for (int m = depth; m >= 0; --m) {
    std::uint64_t cells = std::uint64_t(1) << m;
    best[std::size_t(m)].resize(cells);
    split[std::size_t(m)].resize(cells, 0);
    for (std::uint64_t j = 0; j < cells; ++j) {
      DyadicInterval q{iv, m, j};
      double own = energy_term(sig_i, omega, alpha, k, q.realize()).value;
      double sub = -1.0;
      if (m < depth)
        sub = best[std::size_t(m) + 1][2 * j] + best[std::size_t(m) + 1][2 * j + 1];
      if (sub > own) {
        best[std::size_t(m)][j] = sub;
        split[std::size_t(m)][j] = 1;
      } else {
        best[std::size_t(m)][j] = own;
      }
    }
  }
  // walk the choice flags to recover the maximizing partition
  EnergyReport rep;
  rep.k = k;
  rep.alpha = alpha;
  rep.I = iv;
  rep.sigma_mass = sigma.moment(iv, 0);
  std::vector<std::pair<int, std::uint64_t>> work{{0, 0}};
  Kahan acc;
  while (!work.empty()) {
    auto [m, j] = work.back();
    work.pop_back();
    if (split[std::size_t(m)][j]) {
      work.push_back({m + 1, 2 * j});
      work.push_back({m + 1, 2 * j + 1});
      continue;
    }
    DyadicInterval q{iv, m, j};
    rep.terms.push_back(energy_term(sig_i, omega, alpha, k, q.realize()));
    acc.add(rep.terms.back().value);
  }
  rep.total = rep.sigma_mass > 0 ? acc.s / rep.sigma_mass : 0.0;
  rep.partition = "dyadic sup, depth " + std::to_string(depth);
  return rep;
}

A2Report a2(const Measure& sigma, const Measure& omega, double alpha,
            const Interval& root, int depth) {
  A2Report rep;
  for (const DyadicInterval& q : descendants(root, depth)) {
    Interval iv = q.realize();
    double ms = sigma.moment(iv, 0);
    double mo = omega.moment(iv, 0);
    double len = iv.length_d();
    double ratio = ms * mo / std::pow(len, 2.0 * (1.0 - alpha));
    rep.rows.emplace_back(q, ratio);
    if (ratio > rep.value) {
      rep.value = ratio;
      rep.argmax = q;
    }
  }
  return rep;
}

namespace {

void require_outside(const Measure& nu, const Interval& twoJ,
                     const char* who) {
  for (const auto& a : nu.atoms())
    if (twoJ.contains(a.x))
      throw std::invalid_argument(std::string(who) +
                                  ": support meets the doubled interval");
  for (const auto& p : nu.pieces())
    if (!p.span.intersect(twoJ).empty())
      throw std::invalid_argument(std::string(who) +
                                  ": support meets the doubled interval");
}

Measure abs_measure(const Measure& nu) {
  std::vector<Measure::Atom> atoms;
  for (auto a : nu.atoms()) {
    if (a.mass < 0) a.mass = -a.mass;
    atoms.push_back(a);
  }
  return Measure(std::move(atoms), {nu.pieces().begin(), nu.pieces().end()},
                 nu.mode(), nu.bit_budget());
}

}  // namespace

std::pair<double, double> phi_psi(const DyadicInterval& J, const Measure& nu,
                                  const Measure& omega, const Kernel& kernel,
                                  int k) {
  Interval jv = J.realize();
  Rat half_len = jv.length() / 2;
  Interval twoJ(jv.a - half_len, jv.b + half_len);
  require_outside(nu, twoJ, "phi_psi");

  double m = best_center(omega, jv, k);
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= double(i);

  // Phi factor: 1/k! ∫ (d^k K)(m, y) dnu(y), atoms exact, pieces closed form
  Kahan phi_acc;
  for (const auto& a : nu.atoms())
    phi_acc.add(to_double(a.mass) * kernel.deriv_x(k, m, to_double(a.x)));
  // sgn(m - y)^P = (-1)^P sgn(y - m)^P under the kernel_piece convention
  double coef = falling_alpha(kernel.alpha, k) * kernel.c_cz;
  int parity = k + (kernel.variant == Kernel::Variant::HilbertType ? 1 : 0);
  if (parity % 2 != 0) coef = -coef;
  for (const auto& piece : nu.pieces())
    phi_acc.add(coef * kernel_piece(kernel.alpha - 1.0 - k, parity, m,
                                    to_dense(piece.density), piece.span.a_d(),
                                    piece.span.b_d()));
  double phi_factor = phi_acc.s / kfact;

  // ||Delta_J^omega x^k||^2 from the constructed basis; x^k rebases to the
  // J-local monomials.
  auto [funcs, rep] = build_alpert(omega, J, k);
  double c = jv.center_d(), h = jv.length_d();
  Poly<double> xk{1.0};
  for (int i = 0; i < k; ++i) xk = poly_mul(xk, Poly<double>{c, h});
  Interval lv = J.child(0).realize(), rv = J.child(1).realize();
  double dxk2 = 0.0;
  for (const AlpertFunction& f : funcs) {
    double s = 0.0;
    for (int r = 0; r < k; ++r)
      for (std::size_t q = 0; q < xk.size(); ++q) {
        s += f.left(r) * xk[q] * omega.local_moment_in(lv, jv, r + int(q));
        s += f.right(r) * xk[q] * omega.local_moment_in(rv, jv, r + int(q));
      }
    dxk2 += s * s;
  }
  double phi2 = phi_factor * phi_factor * dxk2;

  double pk = poisson(double(k) + kernel.delta, kernel.alpha, jv,
                      abs_measure(nu));
  double norm2 = scaled_center_norm2(omega, jv, m, k);  // already /|J|^{2k}
  double psi2 = pk * pk * norm2;
  return {std::sqrt(phi2), std::sqrt(psi2)};
}

double op_coefficient(const Kernel& kernel, const Measure& mu,
                      const AlpertFunction& h, const Measure& omega) {
  Interval jv = h.I.realize();
  for (const auto& a : mu.atoms())
    if (jv.contains(a.x))
      throw std::invalid_argument("op_coefficient: singular configuration");
  for (const auto& p : mu.pieces())
    if (!p.span.intersect(jv).empty())
      throw std::invalid_argument("op_coefficient: singular configuration");

  Interval lv = h.I.child(0).realize(), rv = h.I.child(1).realize();
  double c = jv.center_d(), hl = jv.length_d();
  int parity = kernel.variant == Kernel::Variant::HilbertType ? 1 : 0;

  // inner(y) = ∫ K(x, y) h(x) d omega(x): atoms of omega exactly, pieces in
  // closed form (|x-y|^{alpha-1} times a polynomial, y outside the child).
  auto inner_at = [&](double y) {
    Kahan acc;
    for (const auto& a : omega.atoms()) {
      if (!jv.contains(a.x)) continue;
      double x = to_double(a.x);
      acc.add(to_double(a.mass) * kernel.value(x, y) *
              h.eval_local((x - c) / hl));
    }
    for (int side = 0; side < 2; ++side) {
      const Interval& child = side == 0 ? lv : rv;
      const Eigen::VectorXd& coeff = side == 0 ? h.left : h.right;
      Poly<double> hp(coeff.data(), coeff.data() + coeff.size());
      // h as a polynomial in raw x on this child: t = (x - c)/hl
      Poly<double> hx = poly_affine_arg(hp, -c / hl, 1.0 / hl);
      for (const auto& piece : omega.pieces()) {
        Interval clip = piece.span.intersect(child);
        if (clip.empty()) continue;
        Poly<double> q = poly_mul(hx, to_dense(piece.density));
        acc.add(kernel.c_cz * kernel_piece(kernel.alpha - 1.0, parity, y, q,
                                           clip.a_d(), clip.b_d()));
      }
    }
    return acc.s;
  };

  Kahan acc;
  for (const auto& a : mu.atoms())
    acc.add(to_double(a.mass) * inner_at(to_double(a.x)));
  for (const auto& piece : mu.pieces()) {
    Poly<double> dens = to_dense(piece.density);
    acc.add(adaptive_simpson(
        [&](double y) { return poly_eval(dens, y) * inner_at(y); },
        piece.span.a_d(), piece.span.b_d(), 1e-10));
  }
  return acc.s;
}

double delta_op_norm2(const Kernel& kernel, const Measure& nu,
                      const Measure& omega, const DyadicInterval& J, int k) {
  auto [funcs, rep] = build_alpert(omega, J, k);
  double s = 0.0;
  for (const AlpertFunction& f : funcs) {
    double coef = op_coefficient(kernel, nu, f, omega);
    s += coef * coef;
  }
  return s;
}

// --- example ----------------------------------------------------------------

Interval example_interval(int j) {
  double b = std::pow(4.0, -j);
  double len = b / std::sqrt(double(j));
  return Interval(Rat(b - len), Rat(b));
}

Measure example_sigma(double eps, int j_max, int tail_pad) {
  std::vector<Measure::Atom> atoms{{Rat(0), Rat(1)}};
  std::vector<Measure::Piece> pieces;
  for (int j = 2; j <= j_max + tail_pad; ++j) {
    double dens = std::pow(4.0, j) / std::pow(double(j), 0.5 + eps);
    pieces.push_back({example_interval(j), {Rat(dens)}});
  }
  return Measure(std::move(atoms), std::move(pieces), Arithmetic::Float);
}

Measure example_omega(int j_max, int tail_pad) {
  std::vector<Measure::Piece> pieces;
  for (int j = 2; j <= j_max + tail_pad; ++j) {
    double dens = std::sqrt(double(j)) * std::pow(4.0, -j);
    pieces.push_back({example_interval(j), {Rat(dens)}});
  }
  return Measure({}, std::move(pieces), Arithmetic::Float);
}

std::vector<ExampleRow> example_energy_table(double eps, int j_max, int k) {
  if (eps <= 0.0 || j_max < 3)
    throw std::invalid_argument("example table needs eps > 0, j_max >= 3");
  Measure sigma = example_sigma(eps, j_max);
  Measure omega = example_omega(j_max);
  Interval I(Rat(0), Rat(1));
  std::vector<ExampleRow> rows;
  Kahan s1, sk;
  for (int j = 2; j <= j_max; ++j) {
    ExampleRow r;
    r.j = j;
    Interval ij = example_interval(j);
    r.length = ij.length_d();
    r.sigma_mass = sigma.moment(ij, 0);
    r.omega_mass = omega.moment(ij, 0);
    r.a2_ratio = r.sigma_mass * r.omega_mass / (r.length * r.length);
    EnergyTerm t1 = energy_term(sigma, omega, 0.0, 1, ij);
    EnergyTerm tk = energy_term(sigma, omega, 0.0, k, ij);
    r.poisson_1 = t1.poisson_k;
    r.poisson_k = tk.poisson_k;
    r.term_1 = t1.value;
    r.term_k = tk.value;
    s1.add(r.term_1);
    sk.add(r.term_k);
    r.sum_1 = s1.s;
    r.sum_k = sk.s;
    rows.push_back(r);
  }
  return rows;
}

// --- testing operator --------------------------------------------------------

TestOperator::TestOperator(Measure sigma, Measure omega, const Interval& root,
                           int depth, Coupling coupling)
    : sigma_(std::move(sigma)),
      omega_(std::move(omega)),
      root_(root),
      depth_(depth),
      coupling_(coupling) {
  for (const DyadicInterval& q : descendants(root, depth - 1)) {
    bs_[{q.depth, q.index}] = build_alpert(sigma_, q, 2).first;
    bo_[{q.depth, q.index}] = build_alpert(omega_, q, 2).first;
  }
}

const std::vector<AlpertFunction>& TestOperator::sigma_basis(
    const DyadicInterval& q) const {
  return bs_.at({q.depth, q.index});
}

const std::vector<AlpertFunction>& TestOperator::omega_basis(
    const DyadicInterval& q) const {
  return bo_.at({q.depth, q.index});
}

PiecewiseFunction TestOperator::apply(const PiecewiseFunction& f) const {
  PiecewiseFunction out(root_, depth_);
  for (const auto& [key, sig_funcs] : bs_) {
    const auto& om_funcs = bo_.at(key);
    if (sig_funcs.empty() || om_funcs.empty()) continue;
    if (coupling_ == Coupling::Diagonal) {
      std::size_t n = std::min(sig_funcs.size(), om_funcs.size());
      for (std::size_t i = 0; i < n; ++i)
        out.add_alpert(om_funcs[i], inner(f, sig_funcs[i], sigma_));
    } else {
      double coef = 0.0;
      for (const AlpertFunction& s : sig_funcs) coef += inner(f, s, sigma_);
      for (const AlpertFunction& o : om_funcs) out.add_alpert(o, coef);
    }
  }
  return out;
}

TestOperator dyadic_test_op(const Measure& sigma, const Measure& omega,
                            const Interval& root, int depth,
                            Coupling coupling) {
  return TestOperator(sigma, omega, root, depth, coupling);
}

TestingCheck testing_check(const TestOperator& op, const DyadicInterval& Q,
                           const Poly<double>& p) {
  if (p.size() > 2)
    throw std::invalid_argument("testing_check: polynomial degree must be <=1");
  Interval qv = Q.realize();
  // f = 1_Q p, in Q's cell
  PiecewiseFunction f(op.root(), Q.depth);
  f.cell(Q.index) = poly_affine_arg(p, qv.center_d(), qv.length_d());
  PiecewiseFunction tf = op.apply(f);

  Measure omega_q = op.omega().restrict(qv);
  Measure sigma_q = op.sigma().restrict(qv);
  TestingCheck out;
  out.lhs = norm2(tf, omega_q);
  out.rhs = norm2(f, sigma_q);
  out.pass = out.lhs <= out.rhs + 1e-10 * out.rhs;
  return out;
}

SubgridReport subgrid_check(std::span<const DyadicInterval> intervals) {
  SubgridReport rep;
  if (intervals.empty()) return rep;
  Interval root = intervals.front().root;
  auto dilate = [&](const Interval& iv, int num, int den) {
    Rat c = iv.center();
    Rat half = iv.length() * Rat(num, den) / 2;
    Rat lo = c - half, hi = c + half;
    // clip to the root span
    if (lo < root.a) lo = root.a;
    if (hi > root.b) hi = root.b;
    return std::pair<Rat, Rat>(lo, hi);
  };
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = 0; j < intervals.size(); ++j) {
      if (i == j) continue;
      const DyadicInterval &di = intervals[i], &dj = intervals[j];
      if (di == dj) continue;
      Interval iv = di.realize(), jv = dj.realize();
      if (iv.length() > jv.length()) continue;  // roles: |I| <= |J|
      auto [l11i, h11i] = dilate(iv, 11, 9);
      auto [l11j, h11j] = dilate(jv, 11, 9);
      bool meet = std::max(l11i, l11j) <= std::min(h11i, h11j);
      if (!meet) continue;
      auto [l10, h10] = dilate(iv, 10, 9);
      bool contained = jv.a <= l10 && h10 <= jv.b;
      if (!contained) {
        rep.ok = false;
        rep.violations.emplace_back(di, dj);
      }
    }
  }
  return rep;
}

}  // namespace walpert
