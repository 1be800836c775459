#include "walpert/mra.hpp"

#include <cmath>
#include <stdexcept>

namespace walpert {

namespace {

// rebase a polynomial from the local coordinates of `from` to those of `to`
// (t_from = u + v t_to)
Poly<double> rebase(const Poly<double>& p, const Interval& from,
                    const Interval& to) {
  double u = (to.center_d() - from.center_d()) / from.length_d();
  double v = to.length_d() / from.length_d();
  return poly_affine_arg(p, u, v);
}

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

Interval PiecewiseFunction::cell_interval(std::uint64_t j) const {
  return DyadicInterval{root_, depth_, j}.realize();
}

double PiecewiseFunction::eval(double x) const {
  double lo = root_.a_d(), hi = root_.b_d();
  if (x < lo || x >= hi) return 0.0;
  double rel = (x - lo) / (hi - lo);
  auto j = std::uint64_t(rel * double(cells_.size()));
  if (j >= cells_.size()) j = cells_.size() - 1;
  Interval cell = cell_interval(j);
  // double rounding can land x one cell off the exact dyadic boundary
  if (x < cell.a_d() && j > 0)
    cell = cell_interval(--j);
  else if (x >= cell.b_d() && j + 1 < cells_.size())
    cell = cell_interval(++j);
  double t = (x - cell.center_d()) / cell.length_d();
  return poly_eval(cells_[j], t);
}

double PiecewiseFunction::value_at(const Rat& x) const {
  for (const auto& [loc, v] : atom_values_)
    if (loc == x) return v;
  return eval(to_double(x));
}

void PiecewiseFunction::set_atom_value(const Rat& x, double v) {
  for (auto& [loc, val] : atom_values_)
    if (loc == x) {
      val = v;
      return;
    }
  atom_values_.emplace_back(x, v);
}

PiecewiseFunction PiecewiseFunction::refined(int new_depth) const {
  if (new_depth < depth_)
    throw std::invalid_argument("refined: cannot coarsen");
  if (new_depth == depth_) return *this;
  PiecewiseFunction out(root_, new_depth);
  std::uint64_t fan = std::uint64_t(1) << (new_depth - depth_);
  for (std::uint64_t j = 0; j < cells_.size(); ++j) {
    if (cells_[j].empty()) continue;
    Interval coarse = cell_interval(j);
    for (std::uint64_t s = 0; s < fan; ++s) {
      std::uint64_t jj = j * fan + s;
      out.cells_[jj] = rebase(cells_[j], coarse, out.cell_interval(jj));
    }
  }
  out.atom_values_ = atom_values_;
  return out;
}

void PiecewiseFunction::add_scaled(const PiecewiseFunction& g, double s) {
  if (!(root_ == g.root_)) throw std::invalid_argument("root mismatch");
  // snapshot values at every overridden location before touching the cells
  std::vector<std::pair<Rat, double>> merged;
  auto snapshot = [&](const Rat& loc) {
    for (const auto& [l, v] : merged)
      if (l == loc) return;
    merged.emplace_back(loc, value_at(loc) + s * g.value_at(loc));
  };
  for (const auto& [loc, v] : atom_values_) snapshot(loc);
  for (const auto& [loc, v] : g.atom_values_) snapshot(loc);

  if (g.depth_ > depth_) *this = refined(g.depth_);
  PiecewiseFunction gg = g.depth_ < depth_ ? g.refined(depth_) : g;
  for (std::uint64_t j = 0; j < cells_.size(); ++j)
    cells_[j] = poly_add(cells_[j], poly_scale(gg.cells_[j], s));
  for (const auto& [loc, v] : merged) set_atom_value(loc, v);
}

void PiecewiseFunction::add_poly_on(const DyadicInterval& Q,
                                    const Poly<double>& p, double s) {
  if (!(root_ == Q.root)) throw std::invalid_argument("root mismatch");
  if (Q.depth > depth_) *this = refined(Q.depth);
  Interval qv = Q.realize();
  std::uint64_t fan = std::uint64_t(1) << (depth_ - Q.depth);
  for (std::uint64_t t = 0; t < fan; ++t) {
    std::uint64_t j = Q.index * fan + t;
    cells_[j] = poly_add(cells_[j],
                         poly_scale(rebase(p, qv, cell_interval(j)), s));
  }
}

void PiecewiseFunction::add_alpert(const AlpertFunction& h, double s) {
  Poly<double> left(h.left.data(), h.left.data() + h.left.size());
  Poly<double> right(h.right.data(), h.right.data() + h.right.size());
  // h's coefficients are in the coordinates of the parent I
  Interval iv = h.I.realize();
  DyadicInterval cl = h.I.child(0), cr = h.I.child(1);
  add_poly_on(cl, rebase(left, iv, cl.realize()), s);
  add_poly_on(cr, rebase(right, iv, cr.realize()), s);
}

void PiecewiseFunction::scale(double s) {
  for (auto& c : cells_)
    for (auto& x : c) x *= s;
  for (auto& [loc, v] : atom_values_) v *= s;
}

double integral_against(const PiecewiseFunction& f, const Measure& mu,
                        const DyadicInterval& Q, const Poly<double>& p) {
  if (!(f.root() == Q.root)) throw std::invalid_argument("root mismatch");
  Interval qv = Q.realize();
  Kahan acc;
  if (Q.depth <= f.depth()) {
    std::uint64_t fan = std::uint64_t(1) << (f.depth() - Q.depth);
    for (std::uint64_t t = 0; t < fan; ++t) {
      std::uint64_t j = Q.index * fan + t;
      Interval cell = f.cell_interval(j);
      Poly<double> prod = poly_mul(f.cell(j), rebase(p, qv, cell));
      for (std::size_t r = 0; r < prod.size(); ++r)
        if (prod[r] != 0.0)
          acc.add(prod[r] * mu.piece_local_moment_in(cell, cell, int(r)));
    }
  } else {
    // Q below the function grid: a single polynomial cell covers it
    std::uint64_t j = Q.index >> (Q.depth - f.depth());
    Interval cell = f.cell_interval(j);
    Poly<double> prod = poly_mul(rebase(f.cell(j), cell, qv), p);
    for (std::size_t r = 0; r < prod.size(); ++r)
      if (prod[r] != 0.0)
        acc.add(prod[r] * mu.piece_local_moment_in(qv, qv, int(r)));
  }
  double c = qv.center_d(), h = qv.length_d();
  for (const auto& a : mu.atoms_in(qv)) {
    double t = (to_double(a.x) - c) / h;
    acc.add(to_double(a.mass) * f.value_at(a.x) * poly_eval(p, t));
  }
  return acc.s;
}

double inner(const PiecewiseFunction& f, const PiecewiseFunction& g,
             const Measure& mu) {
  if (!(f.root() == g.root())) throw std::invalid_argument("root mismatch");
  int depth = std::max(f.depth(), g.depth());
  PiecewiseFunction fr = f.refined(depth), gr = g.refined(depth);
  Kahan acc;
  for (std::uint64_t j = 0; j < fr.cell_count(); ++j) {
    if (fr.cell(j).empty() || gr.cell(j).empty()) continue;
    Interval cell = fr.cell_interval(j);
    Poly<double> prod = poly_mul(fr.cell(j), gr.cell(j));
    for (std::size_t r = 0; r < prod.size(); ++r)
      if (prod[r] != 0.0)
        acc.add(prod[r] * mu.piece_local_moment_in(cell, cell, int(r)));
  }
  for (const auto& a : mu.atoms_in(fr.root()))
    acc.add(to_double(a.mass) * fr.value_at(a.x) * gr.value_at(a.x));
  return acc.s;
}

double inner(const PiecewiseFunction& f, const AlpertFunction& h,
             const Measure& mu) {
  Poly<double> left(h.left.data(), h.left.data() + h.left.size());
  Poly<double> right(h.right.data(), h.right.data() + h.right.size());
  Interval iv = h.I.realize();
  DyadicInterval cl = h.I.child(0), cr = h.I.child(1);
  double s = integral_against(f, mu, cl, rebase(left, iv, cl.realize()));
  s += integral_against(f, mu, cr, rebase(right, iv, cr.realize()));
  return s;
}

double norm2(const PiecewiseFunction& f, const Measure& mu) {
  return inner(f, f, mu);
}

Poly<double> e_projection(const PiecewiseFunction& f, const Measure& mu,
                          const DyadicInterval& Q, int k) {
  MomentMatrix M = moment_matrix(mu, Q, k);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    Poly<double> ti(std::size_t(i) + 1, 0.0);
    ti[std::size_t(i)] = 1.0;
    b(i) = integral_against(f, mu, Q, ti);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.m);
  double lmax = es.eigenvalues().maxCoeff();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < k; ++i) {
    double lambda = es.eigenvalues()(i);
    if (lmax <= 0 || lambda <= kRankTol * lmax) continue;
    Eigen::VectorXd v = es.eigenvectors().col(i);
    c += v.dot(b) / lambda * v;
  }
  return Poly<double>(c.data(), c.data() + k);
}

DeltaResult delta_projection(const PiecewiseFunction& f, const Measure& mu,
                             const DyadicInterval& Q, int k) {
  auto [funcs, rep] = build_alpert(mu, Q, k);
  PiecewiseFunction d1(f.root(), std::min(std::max(f.depth(), Q.depth + 1),
                                          kMaxGridDepth));
  for (const AlpertFunction& h : funcs) d1.add_alpert(h, inner(f, h, mu));

  // second route: restriction of child E-projections minus the parent one
  PiecewiseFunction d2(f.root(), d1.depth());
  for (int side = 0; side < 2; ++side) {
    DyadicInterval c = Q.child(side);
    d2.add_poly_on(c, e_projection(f, mu, c, k), 1.0);
  }
  d2.add_poly_on(Q, e_projection(f, mu, Q, k), -1.0);

  PiecewiseFunction diff = d1;
  diff.add_scaled(d2, -1.0);
  DeltaResult out{std::move(d1), std::sqrt(std::max(0.0, norm2(diff, mu)))};
  return out;
}

WaveletExpansion expand(const PiecewiseFunction& f, const Measure& mu,
                        const Interval& root, int depth, int k) {
  if (!(f.root() == root)) throw std::invalid_argument("root mismatch");
  WaveletExpansion e;
  e.root = root;
  e.k = k;
  e.depth = depth;
  DyadicInterval top{root, 0, 0};
  e.coarse = e_projection(f, mu, top, k);
  for (int m = 0; m < depth; ++m) {
    for (std::uint64_t j = 0; j < (std::uint64_t(1) << m); ++j) {
      DyadicInterval q{root, m, j};
      auto [funcs, rep] = build_alpert(mu, q, k);
      if (funcs.empty()) continue;
      std::vector<double> coefs;
      coefs.reserve(funcs.size());
      for (const AlpertFunction& h : funcs) coefs.push_back(inner(f, h, mu));
      e.details[{m, j}] = std::move(coefs);
    }
  }
  return e;
}

PiecewiseFunction reconstruct(const WaveletExpansion& e, const Measure& mu) {
  PiecewiseFunction g(e.root, e.depth);
  DyadicInterval top{e.root, 0, 0};
  g.add_poly_on(top, e.coarse, 1.0);
  for (const auto& [key, coefs] : e.details) {
    DyadicInterval q{e.root, key.first, key.second};
    auto [funcs, rep] = build_alpert(mu, q, e.k);
    if (funcs.size() != coefs.size())
      throw std::runtime_error("reconstruct: basis cardinality changed");
    for (std::size_t i = 0; i < funcs.size(); ++i)
      g.add_alpert(funcs[i], coefs[i]);
  }
  return g;
}

double WaveletExpansion::detail_energy() const {
  double s = 0.0;
  for (const auto& [key, coefs] : details)
    for (double c : coefs) s += c * c;
  return s;
}

double expansion_norm2(const WaveletExpansion& e, const Measure& mu) {
  DyadicInterval top{e.root, 0, 0};
  int k = int(e.coarse.size());
  MomentMatrix M = moment_matrix(mu, top, k);
  Eigen::VectorXd c(k);
  for (int i = 0; i < k; ++i) c(i) = e.coarse[std::size_t(i)];
  return c.dot(M.m * c) + e.detail_energy();
}

double check_telescoping(const PiecewiseFunction& f, const Measure& mu,
                         const DyadicInterval& K, const DyadicInterval& Lc,
                         int k) {
  if (!Lc.contains(K) || Lc.depth >= K.depth)
    throw std::invalid_argument("need K strictly inside Lc");
  // sum of detail projections over K ⊊ I ⊆ Lc, evaluated on K
  std::vector<std::pair<std::vector<AlpertFunction>, std::vector<double>>> terms;
  for (DyadicInterval i = K.parent();; i = i.parent()) {
    auto [funcs, rep] = build_alpert(mu, i, k);
    std::vector<double> coefs;
    for (const AlpertFunction& h : funcs) coefs.push_back(inner(f, h, mu));
    terms.emplace_back(std::move(funcs), std::move(coefs));
    if (i == Lc || i.depth == 0) break;
  }
  Poly<double> ek = e_projection(f, mu, K, k);
  Poly<double> el = e_projection(f, mu, Lc, k);
  Interval kv = K.realize(), lv = Lc.realize();

  auto lhs_minus_rhs = [&](double x) {
    double s = 0.0;
    for (const auto& [funcs, coefs] : terms)
      for (std::size_t i = 0; i < funcs.size(); ++i)
        s += coefs[i] * funcs[i].eval(x);
    double tk = (x - kv.center_d()) / kv.length_d();
    double tl = (x - lv.center_d()) / lv.length_d();
    return s - (poly_eval(ek, tk) - poly_eval(el, tl));
  };

  // the identity holds mu-almost everywhere: sample atoms, and Chebyshev
  // nodes on the charged part of each finest cell (cell ∩ density pieces)
  double worst = 0.0;
  for (const auto& a : mu.atoms_in(kv))
    worst = std::max(worst, std::abs(lhs_minus_rhs(to_double(a.x))));
  int fine = std::max(f.depth(), K.depth);
  std::uint64_t fan = std::uint64_t(1) << (fine - K.depth);
  std::uint64_t base = K.index << (fine - K.depth);
  for (std::uint64_t t = 0; t < fan; ++t) {
    Interval cell = DyadicInterval{K.root, fine, base + t}.realize();
    for (const auto& piece : mu.pieces()) {
      Interval clip = piece.span.intersect(cell);
      if (clip.empty()) continue;
      for (int node = 0; node < 7; ++node) {
        double theta = M_PI * (2.0 * node + 1.0) / 14.0;
        double x = clip.center_d() + 0.5 * clip.length_d() * std::cos(theta);
        worst = std::max(worst, std::abs(lhs_minus_rhs(x)));
      }
    }
  }
  return worst;
}

}  // namespace walpert
