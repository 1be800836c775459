#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "walpert/mra.hpp"

namespace walpert {

// Model fractional CZ kernels with exact x-derivative formulas:
//   riesz:        K(x,y) = |x-y|^(alpha-1)
//   hilbert-type: K(x,y) = sign(x-y) |x-y|^(alpha-1)
// Both satisfy the fractional size/smoothness bounds with C_CZ depending only
// on alpha and the derivative order.
struct Kernel {
  enum class Variant { Riesz, HilbertType };
  Variant variant = Variant::Riesz;
  double alpha = 0.0;
  int k = 1;           // smoothness order carried for reporting
  double delta = 0.5;  // Hölder exponent used in Psi
  double c_cz = 1.0;

  double value(double x, double y) const { return deriv_x(0, x, y); }
  // exact d^order/dx^order K(x, y)
  double deriv_x(int order, double x, double y) const;
};

// m-weighted fractional Poisson integral
//   P_m^alpha(J, mu) = ∫ |J|^m / (|J| + |y - c_J|)^(m+1-alpha) dmu(y).
// Atoms and polynomial pieces are integrated in closed form (piecewise power
// antiderivatives, log terms included).
double poisson(double m_order, double alpha, const Interval& J,
               const Measure& mu);

// argmin over closure(J) of c -> ∫_J (x - c)^{2k} d omega, by exact root
// isolation of the derivative polynomial.
double best_center(const Measure& omega, const Interval& J, int k);

struct EnergyTerm {
  Interval cell;
  double poisson_k = 0.0;   // P_k^alpha(I_r, 1_I sigma)
  double center = 0.0;      // m^k of the cell
  double norm2 = 0.0;       // ∫ ((x-m)/|I_r|)^{2k} d omega over the cell
  double value = 0.0;       // poisson_k^2 * norm2
};

struct EnergyReport {
  int k = 1;
  double alpha = 0.0;
  Interval I;
  double sigma_mass = 0.0;
  std::vector<EnergyTerm> terms;
  double total = 0.0;  // sum of term values / |I|_sigma
  std::string partition;
};

// The bracketed k-energy sum for one explicit partition (any finite disjoint
// family inside I; a partial family yields a lower bound).
EnergyReport k_energy(const Measure& sigma, const Measure& omega, double alpha,
                      int k, const Interval& I,
                      std::span<const Interval> partition);

// Certified lower bound for the sup over partitions: bottom-up dynamic
// programming over all dyadic partitions of I up to `depth`.
EnergyReport k_energy_dyadic_sup(const Measure& sigma, const Measure& omega,
                                 double alpha, int k, const DyadicInterval& I,
                                 int depth);

struct A2Report {
  double value = 0.0;
  DyadicInterval argmax;
  std::vector<std::pair<DyadicInterval, double>> rows;
};

// sup over dyadic I of |I|_sigma |I|_omega / |I|^{2(1-alpha)}.
A2Report a2(const Measure& sigma, const Measure& omega, double alpha,
            const Interval& root, int depth);

// Monotonicity-Lemma quantities for a measure nu supported outside 2J:
//   Phi^2 = |1/k! ∫ (d^k_x K)(m_J^k, y) dnu|^2 * ||Delta_J^omega x^k||^2
//   Psi^2 = (P_{k+delta}^alpha(J, nu)/|J|^k)^2 * ||(x-m_J^k)^k||^2_{1_J omega}
// nu may carry signed atom masses; Psi uses |nu|.
std::pair<double, double> phi_psi(const DyadicInterval& J, const Measure& nu,
                                  const Measure& omega, const Kernel& kernel,
                                  int k);

// <T^alpha mu, h>_omega as a nested integral; closed form when mu is atomic,
// adaptive quadrature in the outer variable otherwise.  Requires supp mu
// disjoint from h's interval.
double op_coefficient(const Kernel& kernel, const Measure& mu,
                      const AlpertFunction& h, const Measure& omega);

// ||Delta_J^omega T^alpha nu||^2 = sum of squared coefficients over the
// detail basis of J.
double delta_op_norm2(const Kernel& kernel, const Measure& nu,
                      const Measure& omega, const DyadicInterval& J, int k);

// --- the lacunary two-weight example ---------------------------------------

// sigma = delta_0 + sum_j 4^j j^{-1/2-eps} 1_{I_j},
// omega = sum_j j^{1/2} 4^{-j} 1_{I_j},  I_j = [4^-j(1 - j^-1/2), 4^-j).
// Pieces run to j_max + tail_pad so the Poisson integrals of the reported
// rows see the (convergent) tail rather than an artificial cutoff.
inline constexpr int kExampleTailPad = 20;
Measure example_sigma(double eps, int j_max, int tail_pad = kExampleTailPad);
Measure example_omega(int j_max, int tail_pad = kExampleTailPad);
Interval example_interval(int j);

struct ExampleRow {
  int j = 0;
  double length = 0.0;
  double sigma_mass = 0.0;
  double omega_mass = 0.0;
  double a2_ratio = 0.0;
  double poisson_1 = 0.0;
  double poisson_k = 0.0;
  double term_1 = 0.0;
  double term_k = 0.0;
  double sum_1 = 0.0;  // partial sums of unnormalized terms
  double sum_k = 0.0;
};

std::vector<ExampleRow> example_energy_table(double eps, int j_max, int k);

// --- dyadic testing operator ------------------------------------------------

// T f = sum over grid intervals of the coefficient pass-through between the
// two Alpert families (k = 2).  Diagonal coupling sends <f, a^{sigma,i}> to
// a^{omega,i}; that is the variant whose testing conditions are a theorem
// (Bessel).  The full coupling pairs every i with every j and only obeys the
// weaker bound ||Tf||^2 <= 4 ||f||^2.
enum class Coupling { Diagonal, Full };

class TestOperator {
 public:
  TestOperator(Measure sigma, Measure omega, const Interval& root, int depth,
               Coupling coupling = Coupling::Diagonal);

  PiecewiseFunction apply(const PiecewiseFunction& f) const;
  const Measure& sigma() const { return sigma_; }
  const Measure& omega() const { return omega_; }
  const Interval& root() const { return root_; }
  int depth() const { return depth_; }
  Coupling coupling() const { return coupling_; }
  const std::vector<AlpertFunction>& sigma_basis(const DyadicInterval& q) const;
  const std::vector<AlpertFunction>& omega_basis(const DyadicInterval& q) const;

 private:
  Measure sigma_, omega_;
  Interval root_;
  int depth_;
  Coupling coupling_;
  std::map<std::pair<int, std::uint64_t>, std::vector<AlpertFunction>> bs_, bo_;
};

TestOperator dyadic_test_op(const Measure& sigma, const Measure& omega,
                            const Interval& root, int depth,
                            Coupling coupling = Coupling::Diagonal);

struct TestingCheck {
  double lhs = 0.0;  // ∫_Q |T(1_Q p)|^2 d omega
  double rhs = 0.0;  // ∫_Q |p|^2 d sigma
  bool pass = false;
};

// p given by coefficients in the raw x coordinate, degree <= k-1 = 1.
TestingCheck testing_check(const TestOperator& op, const DyadicInterval& Q,
                           const Poly<double>& p);

// Pairwise verification of the subgrid separation condition: for |I| <= |J|
// with (11/9)I ∩ (11/9)J nonempty, (10/9)I ⊂ J must hold.  Dilates are
// clipped to the root span, so families hugging the root boundary (the
// [0, 4^-j) chain) are admitted while sibling pairs are rejected.
struct SubgridReport {
  bool ok = true;
  std::vector<std::pair<DyadicInterval, DyadicInterval>> violations;
};

SubgridReport subgrid_check(std::span<const DyadicInterval> intervals);

}  // namespace walpert
