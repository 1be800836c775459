#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "walpert/gram.hpp"
#include "walpert/moments.hpp"

namespace walpert {

// A basis function of the detail space of interval I: polynomial of degree
// <= k-1 on each child, zero elsewhere, written in the I-local coordinate
// t = (x - c_I)/|I| (left child is t in [-1/2, 0), right child [0, 1/2)).
// Unit norm in L^2(mu); the first nonzero right coefficient is positive.
struct AlpertFunction {
  DyadicInterval I;
  int k = 1;
  int ell = 1;  // 1-based index within the interval's family
  Eigen::VectorXd left;   // k coefficients
  Eigen::VectorXd right;  // k coefficients

  double eval_local(double t) const;
  double eval(double x) const;
};

struct ConstructionReport {
  int count = 0;
  bool nondegenerate = false;
  bool extra_moments_satisfied = false;
  double ortho_residual = 0.0;        // max |<a_i,a_j> - delta_ij|
  double base_moment_residual = 0.0;  // max |∫ a t^i dμ|, i <= k-1
  double extra_moment_residual = 0.0; // max |∫ a_l t^i dμ|, k <= i <= k+l-2
  std::string note;
};

// Weighted Haar function from the explicit closed form; nullopt (the zero
// function) when a child is uncharged.
std::optional<AlpertFunction> haar(const Measure& mu, const DyadicInterval& I);

// alpha = -L^{-1} R beta together with the inner-product matrix
// X = R L^{-1} R + R of the beta-space.  Requires L positive definite.
struct AlpertSystem {
  bool ok = false;
  std::string error;
  Eigen::MatrixXd neg_l_inv_r;  // alpha = neg_l_inv_r * beta
  Eigen::MatrixXd x;            // symmetric; PD iff R is

  Eigen::VectorXd alpha(const Eigen::VectorXd& beta) const {
    return neg_l_inv_r * beta;
  }
};

AlpertSystem alpert_system(const MomentMatrix& L, const MomentMatrix& R,
                           double tol = kRankTol);

// The additional-moment row vectors w_k^i = -v_left (L^{-1}R) + v_right and
// their X-inner-product representatives u_k^i = X^{-1} w_k^i, for
// k <= i <= 2k-2.  Only defined on nondegenerate intervals.
struct ExtraMomentVector {
  int i;
  Eigen::RowVectorXd w;
  Eigen::VectorXd u;
};

std::vector<ExtraMomentVector> extra_moment_vectors(const Measure& mu,
                                                    const DyadicInterval& I,
                                                    int k,
                                                    double tol = kRankTol);

// The complete per-interval construction:
//  - both child matrices PD: k functions with the full set of additional
//    Alpert moment conditions, chosen through the X-orthogonality ladder;
//  - exactly one PD: rank(singular side) functions from the one-sided solve;
//  - both singular: the Gram-orthogonalization fallback.
std::pair<std::vector<AlpertFunction>, ConstructionReport> build_alpert(
    const Measure& mu, const DyadicInterval& I, int k, double tol = kRankTol);

// The k = 2 one-sided degeneracy diagnostic: whether the extra-moment data
// lies in Range(R_I) (always does, by the solvability remark), and how many
// functions survive.
struct K2Diagnostic {
  enum class Case { NotApplicable, OneSided, BothPointMass, OtherDegenerate };
  Case situation = Case::NotApplicable;
  bool membership = false;
  double membership_residual = 0.0;
  int function_count = 0;
};

K2Diagnostic k2_special(const Measure& mu, const DyadicInterval& I,
                        double tol = kRankTol);

// Recompute every inner product and moment from the measure and report the
// worst violation per condition class.
ConstructionReport verify_basis(const Measure& mu, const DyadicInterval& I,
                                std::span<const AlpertFunction> funcs, int k);

// Detail-space basis in the gram_oracle's coefficient-table layout, for the
// projection-form comparison.
DetailSpaceBasis to_detail_basis(std::span<const AlpertFunction> funcs, int k);

}  // namespace walpert
