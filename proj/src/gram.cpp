#include "walpert/gram.hpp"

#include <cmath>
#include <stdexcept>

namespace walpert {

std::vector<MultiIndex> monomial_indices(int n, int k) {
  std::vector<MultiIndex> out;
  auto push = [&](int a0, int a1, int a2) { out.push_back({a0, a1, a2}); };
  for (int total = 0; total <= k - 1; ++total) {
    if (n == 1) {
      push(total, 0, 0);
    } else if (n == 2) {
      for (int a0 = total; a0 >= 0; --a0) push(a0, total - a0, 0);
    } else {
      for (int a0 = total; a0 >= 0; --a0)
        for (int a1 = total - a0; a1 >= 0; --a1) push(a0, a1, total - a0 - a1);
    }
  }
  return out;
}

namespace {

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

}  // namespace

ChildMomentFn child_moments(const Measure& mu, const DyadicInterval& Q) {
  Interval frame = Q.realize();
  std::array<Interval, 2> kids{Q.child(0).realize(), Q.child(1).realize()};
  return [mu, frame, kids](int child, const MultiIndex& alpha) {
    return mu.local_moment_in(kids[std::size_t(child)], frame, alpha[0]);
  };
}

ChildMomentFn child_moments(const BoxMeasure& mu, const DyadicCube& Q) {
  int n = Q.n;
  std::array<Interval, 3> frame = Q.realize();
  std::vector<std::array<Interval, 3>> kids;
  for (const DyadicCube& c : Q.children()) kids.push_back(c.realize());
  return [mu, n, frame, kids](int child, const MultiIndex& alpha) {
    const auto& cell = kids[std::size_t(child)];
    double tot = 0.0;
    for (const auto& a : mu.atoms) {
      bool inside = true;
      double val = to_double(a.mass);
      for (int ax = 0; ax < n; ++ax) {
        if (!cell[ax].contains(a.x[ax])) {
          inside = false;
          break;
        }
        double t = (to_double(a.x[ax]) - frame[ax].center_d()) /
                   frame[ax].length_d();
        val *= std::pow(t, alpha[ax]);
      }
      if (inside) tot += val;
    }
    for (const auto& b : mu.boxes) {
      double val = to_double(b.density);
      bool nonempty = true;
      for (int ax = 0; ax < n; ++ax) {
        Interval clip = b.box[ax].intersect(cell[ax]);
        if (clip.empty()) {
          nonempty = false;
          break;
        }
        double c = frame[ax].center_d(), h = frame[ax].length_d();
        double tlo = (clip.a_d() - c) / h, thi = (clip.b_d() - c) / h;
        int e = alpha[ax] + 1;
        val *= h * (std::pow(thi, e) - std::pow(tlo, e)) / double(e);
      }
      if (nonempty) tot += val;
    }
    return tot;
  };
}

std::vector<Generator> generators_from(int n, int k, const ChildMomentFn& mom) {
  std::vector<Generator> out;
  auto mons = monomial_indices(n, k);
  int kids = 1 << n;
  for (int c = 0; c < kids; ++c) {
    if (mom(c, MultiIndex{0, 0, 0}) == 0.0) continue;  // uncharged child
    for (const auto& a : mons) out.push_back({c, a});
  }
  return out;
}

std::vector<Generator> generators(const Measure& mu, const DyadicInterval& Q,
                                  int k) {
  return generators_from(1, k, child_moments(mu, Q));
}

std::vector<Generator> generators(const BoxMeasure& mu, const DyadicCube& Q,
                                  int k) {
  return generators_from(mu.n, k, child_moments(mu, Q));
}

Eigen::MatrixXd generator_gram(int n, int k, const ChildMomentFn& mom) {
  auto mons = monomial_indices(n, k);
  int a = int(mons.size());
  int kids = 1 << n;
  int dim = kids * a;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (int c = 0; c < kids; ++c)
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j)
        g(c * a + i, c * a + j) = mom(c, add(mons[i], mons[j]));
  return g;
}

DetailSpaceBasis gram_basis_from(int n, int k, const ChildMomentFn& mom,
                                 double tol) {
  auto mons = monomial_indices(n, k);
  int a = int(mons.size());
  int kids = 1 << n;
  int dim = kids * a;

  // Gram of generators (block diagonal over children) and cross moments with
  // the global polynomials s_j = 1_Q t^beta.
  Eigen::MatrixXd g = generator_gram(n, k, mom);
  Eigen::MatrixXd cross(dim, a);  // <g_p, s_j>
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(a, a);
  for (int c = 0; c < kids; ++c)
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j) {
        double v = mom(c, add(mons[i], mons[j]));
        cross(c * a + i, j) = v;
        s(i, j) += v;
      }

  // Coefficients of proj(g_p) onto Span{s_j}: S^+ cross^T, rank-truncated.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ses(s);
  double smax = ses.eigenvalues().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(a);
  for (int i = 0; i < a; ++i)
    if (smax > 0 && ses.eigenvalues()(i) > kRankTol * smax)
      inv(i) = 1.0 / ses.eigenvalues()(i);
  Eigen::MatrixXd s_pinv =
      ses.eigenvectors() * inv.asDiagonal() * ses.eigenvectors().transpose();
  Eigen::MatrixXd proj_coeff = s_pinv * cross.transpose();  // a x dim

  // Gram of projected-out generators: G' = G - C S^+ C^T.
  Eigen::MatrixXd gp = g - cross * proj_coeff;
  gp = 0.5 * (gp + gp.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gp);
  double lmax = es.eigenvalues().maxCoeff();
  // the cutoff is relative to the generator Gram's scale, not to gp's own
  // largest eigenvalue: when the detail space is trivial, gp is pure
  // projection residue and must not be mistaken for rank
  double scale = std::max(lmax, g.trace());
  DetailSpaceBasis basis;
  basis.n = n;
  basis.k = k;
  basis.n_children = kids;
  basis.monomials = mons;
  basis.gram_rank_cutoff = scale > 0 ? tol * scale : 0.0;
  if (lmax <= basis.gram_rank_cutoff) return basis;

  // f = sum_p v_p (g_p - proj(g_p)) / sqrt(lambda); expand proj(g_p) back
  // over the generators (s_j = sum over children of 1_child t^beta).
  for (int i = dim - 1; i >= 0; --i) {
    double lambda = es.eigenvalues()(i);
    if (lambda <= basis.gram_rank_cutoff) break;
    Eigen::VectorXd v = es.eigenvectors().col(i) / std::sqrt(lambda);
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(dim);
    for (int p = 0; p < dim; ++p) {
      if (v(p) == 0.0) continue;
      coeff(p) += v(p);
      for (int j = 0; j < a; ++j) {
        double pc = proj_coeff(j, p) * v(p);
        if (pc == 0.0) continue;
        for (int c = 0; c < kids; ++c) coeff(c * a + j) -= pc;
      }
    }
    basis.functions.push_back(coeff);
  }

  // one Gram-Schmidt polish in the measured inner product
  auto dot = [&](const Eigen::VectorXd& f, const Eigen::VectorXd& h) {
    return f.dot(g * h);
  };
  for (std::size_t i = basis.functions.size(); i-- > 0;) {
    Eigen::VectorXd& f = basis.functions[i];
    for (std::size_t j = i + 1; j < basis.functions.size(); ++j)
      f -= dot(f, basis.functions[j]) * basis.functions[j];
    double n2 = dot(f, f);
    if (n2 > 0) f /= std::sqrt(n2);
  }
  return basis;
}

DetailSpaceBasis gram_basis(const Measure& mu, const DyadicInterval& Q, int k,
                            double tol) {
  return gram_basis_from(1, k, child_moments(mu, Q), tol);
}

DetailSpaceBasis gram_basis(const BoxMeasure& mu, const DyadicCube& Q, int k,
                            double tol) {
  return gram_basis_from(mu.n, k, child_moments(mu, Q), tol);
}

Eigen::MatrixXd projection_form_from(int n, int k, const ChildMomentFn& mom,
                                     const DetailSpaceBasis& basis) {
  auto mons = monomial_indices(n, k);
  int a = int(mons.size());
  int kids = 1 << n;
  int dim = kids * a;
  int nf = basis.count();
  // A(f, p) = <f_i, g_p>; B = A^T A
  Eigen::MatrixXd amat = Eigen::MatrixXd::Zero(nf, dim);
  for (int f = 0; f < nf; ++f) {
    const Eigen::VectorXd& coeff = basis.functions[std::size_t(f)];
    for (int c = 0; c < kids; ++c)
      for (int p = 0; p < a; ++p) {
        double acc = 0.0;
        for (int i = 0; i < a; ++i) {
          double cf = coeff(c * a + i);
          if (cf != 0.0) acc += cf * mom(c, add(mons[i], mons[p]));
        }
        amat(f, c * a + p) = acc;
      }
  }
  return amat.transpose() * amat;
}

Eigen::MatrixXd projection_form(const Measure& mu, const DyadicInterval& Q,
                                const DetailSpaceBasis& basis) {
  return projection_form_from(basis.n, basis.k, child_moments(mu, Q), basis);
}

}  // namespace walpert
