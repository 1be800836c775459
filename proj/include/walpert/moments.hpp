#pragma once

#include <Eigen/Dense>

#include "walpert/grid.hpp"
#include "walpert/measure.hpp"

namespace walpert {

inline constexpr double kRankTol = 1e-10;        // relative eigenvalue cutoff
inline constexpr double kAngleTol = 1e-8;        // principal-angle cutoff

// k x k Hankel matrix of measure moments over `interval`, taken in the local
// coordinate of `frame`: entry (i,j) = ∫ t^{i+j} dμ, t = (x - c_frame)/|frame|.
// Child matrices of a parent use the parent's frame so that L + R = M.
struct MomentMatrix {
  int k = 0;
  Interval interval;
  Interval frame;
  Eigen::MatrixXd m;
};

struct RankReport {
  int rank = 0;
  bool is_positive_definite = false;
  Eigen::VectorXd eigenvalues;  // ascending
  double tol = kRankTol;
  bool semidefinite_ok = true;  // false flags numerical corruption
};

// rank-one dyad V_k(x) V_k(x)^T with V_k(x) = (1, x, ..., x^{k-1})
Eigen::MatrixXd vandermonde_dyad(double x, int k);

MomentMatrix moment_matrix(const Measure& mu, const Interval& J, int k);
MomentMatrix moment_matrix_in(const Measure& mu, const Interval& J,
                              const Interval& frame, int k);
MomentMatrix moment_matrix(const Measure& mu, const DyadicInterval& Q, int k);

// (L, R) over the children of Q in Q's own frame; L + R = M_{Q,k}.
std::pair<MomentMatrix, MomentMatrix> child_matrices(const Measure& mu,
                                                     const DyadicInterval& Q,
                                                     int k);

RankReport rank_pd(const MomentMatrix& M, double tol = kRankTol);

// Exact rank over the rationals (Gaussian elimination on the exact Hankel
// matrix); the route the van der Monde rank theorem is checked on.
int rank_exact(const Measure& mu, const Interval& J, int k);

// dim(Range L ∩ Range R) via principal angles of the rank-truncated
// orthonormal range bases.
int dim_detail_space(const Measure& mu, const DyadicInterval& Q, int k,
                     double tol = kRankTol, double angle_tol = kAngleTol);

// A_{k,n} = binom(n+k-1, n), the number of monomials of degree <= k-1 in n
// variables; detail_dim_bound = (2^n - 1) A_{k,n}.
long poly_count(int n, int k);
long detail_dim_bound(int n, int k);

}  // namespace walpert
