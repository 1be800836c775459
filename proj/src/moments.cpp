#include "walpert/moments.hpp"

#include <stdexcept>

namespace walpert {

Eigen::MatrixXd vandermonde_dyad(double x, int k) {
  Eigen::VectorXd v(k);
  double p = 1.0;
  for (int i = 0; i < k; ++i) {
    v(i) = p;
    p *= x;
  }
  return v * v.transpose();
}

MomentMatrix moment_matrix_in(const Measure& mu, const Interval& J,
                              const Interval& frame, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<double> mom(2 * k - 1);
  for (int i = 0; i < 2 * k - 1; ++i) mom[i] = mu.local_moment_in(J, frame, i);
  MomentMatrix M{k, J, frame, Eigen::MatrixXd(k, k)};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) M.m(i, j) = mom[i + j];
  return M;
}

MomentMatrix moment_matrix(const Measure& mu, const Interval& J, int k) {
  return moment_matrix_in(mu, J, J, k);
}

MomentMatrix moment_matrix(const Measure& mu, const DyadicInterval& Q, int k) {
  Interval j = Q.realize();
  return moment_matrix_in(mu, j, j, k);
}

std::pair<MomentMatrix, MomentMatrix> child_matrices(const Measure& mu,
                                                     const DyadicInterval& Q,
                                                     int k) {
  Interval frame = Q.realize();
  Interval left = Q.child(0).realize();
  Interval right = Q.child(1).realize();
  return {moment_matrix_in(mu, left, frame, k),
          moment_matrix_in(mu, right, frame, k)};
}

RankReport rank_pd(const MomentMatrix& M, double tol) {
  RankReport rep;
  rep.tol = tol;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.m);
  rep.eigenvalues = es.eigenvalues();
  double lmax = rep.eigenvalues.maxCoeff();
  if (lmax <= 0.0) {
    // an all-zero matrix is fine; a genuinely negative one is corrupt
    rep.rank = 0;
    rep.semidefinite_ok = rep.eigenvalues.minCoeff() > -1e-14;
    return rep;
  }
  double cut = tol * lmax;
  for (int i = 0; i < rep.eigenvalues.size(); ++i)
    if (rep.eigenvalues(i) > cut) ++rep.rank;
  rep.is_positive_definite = (rep.rank == M.k);
  rep.semidefinite_ok = rep.eigenvalues.minCoeff() >= -cut;
  return rep;
}

int rank_exact(const Measure& mu, const Interval& J, int k) {
  std::vector<Rat> mom;
  for (int i = 0; i < 2 * k - 1; ++i)
    mom.push_back(mu.local_moment_exact_in(J, J, i));
  std::vector<Rat> a(std::size_t(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a[std::size_t(i) * k + j] = mom[i + j];
  int rank = 0;
  for (int col = 0; col < k && rank < k; ++col) {
    int piv = -1;
    for (int r = rank; r < k; ++r)
      if (a[std::size_t(r) * k + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < k; ++j)
      std::swap(a[std::size_t(rank) * k + j], a[std::size_t(piv) * k + j]);
    for (int r = rank + 1; r < k; ++r) {
      if (a[std::size_t(r) * k + col] == 0) continue;
      Rat f = a[std::size_t(r) * k + col] / a[std::size_t(rank) * k + col];
      for (int j = col; j < k; ++j)
        a[std::size_t(r) * k + j] -= f * a[std::size_t(rank) * k + j];
    }
    ++rank;
  }
  return rank;
}

namespace {

// Orthonormal basis of the numerical range (eigenvectors above the relative
// cutoff).
Eigen::MatrixXd range_basis(const MomentMatrix& M, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.m);
  double lmax = es.eigenvalues().maxCoeff();
  if (lmax <= 0.0) return Eigen::MatrixXd(M.k, 0);
  double cut = tol * lmax;
  int r = 0;
  for (int i = 0; i < M.k; ++i)
    if (es.eigenvalues()(i) > cut) ++r;
  return es.eigenvectors().rightCols(r);  // eigenvalues ascend
}

}  // namespace

int dim_detail_space(const Measure& mu, const DyadicInterval& Q, int k,
                     double tol, double angle_tol) {
  auto [L, R] = child_matrices(mu, Q, k);
  Eigen::MatrixXd ul = range_basis(L, tol);
  Eigen::MatrixXd ur = range_basis(R, tol);
  if (ul.cols() == 0 || ur.cols() == 0) return 0;
  Eigen::MatrixXd cross = ul.transpose() * ur;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
  int dim = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1.0 - angle_tol) ++dim;
  return dim;
}

long poly_count(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("n, k must be >= 1");
  // binom(n+k-1, n)
  long num = 1, den = 1;
  for (int i = 1; i <= n; ++i) {
    num *= (k - 1 + i);
    den *= i;
  }
  return num / den;
}

long detail_dim_bound(int n, int k) {
  return ((1L << n) - 1) * poly_count(n, k);
}

}  // namespace walpert
