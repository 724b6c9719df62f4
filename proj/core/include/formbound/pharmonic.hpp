#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "formbound/domain.hpp"
#include "formbound/kform.hpp"
#include "formbound/quadrature.hpp"
#include "formbound/transfer.hpp"

namespace formbound {

/// int_D |w|^p; p <= 1 throws ParameterError.
double energy(const KForm& w, const Domain& dom, double p, const QuadratureConfig& cfg);

/// The affine family base + sum_b c_b d(phi_b), with phi_b running over an independent
/// set of monomial (j-1)-forms x^a dx_I of degree |a| <= max_degree (j = base degree).
/// Energies are integrated with a fixed rule on dom that is exact for polynomial
/// integrands when p is an even integer.
class SolutionSpace {
 public:
  SolutionSpace(KForm base, int max_degree, const Domain& dom, double p,
                const QuadratureConfig& cfg);

  const KForm& base() const { return base_; }
  const std::vector<KForm>& potentials() const { return potentials_; }
  const std::vector<KForm>& gauge() const { return gauge_; }
  std::size_t size() const { return gauge_.size(); }
  double p() const { return p_; }
  /// Rank of the L^2 Gram matrix of the gauge; equals size() by construction.
  std::size_t gram_rank() const { return gram_rank_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  /// base + sum c_b gauge_b with the doubles converted exactly to rationals.
  KForm member(const std::vector<double>& coeffs) const;
  double energy(const std::vector<double>& coeffs) const;
  /// b -> p int |eta|^(p-2) <eta, gauge_b>.
  std::vector<double> gradient(const std::vector<double>& coeffs) const;
  /// Energy and gradient in one pass.
  double energy_and_gradient(const std::vector<double>& coeffs, std::vector<double>& grad) const;
  /// Exact minimizer for p = 2: Gram c = -<base, gauge>.
  std::vector<double> solve_quadratic() const;

 private:
  KForm base_;
  std::vector<KForm> potentials_;
  std::vector<KForm> gauge_;
  double p_;
  PointSet rule_;
  std::size_t components_ = 0;
  Eigen::VectorXd base_values_;   // rule point i, component c at i * components + c
  Eigen::MatrixXd gauge_values_;  // same rows, one column per gauge form
  Eigen::MatrixXd gram_;
  std::size_t gram_rank_ = 0;
};

/// p * int |eta|^(p-2) <eta, d phi_b> at eta = base + sum c_b d phi_b.
std::vector<double> energy_gradient(const std::vector<double>& coeffs, const SolutionSpace& space);

struct PHarmonicOptions {
  double tol = 1e-6;
  int max_iterations = 10000;
  /// Run the descent even for p = 2 instead of the direct solve.
  bool force_iterative = false;
  int memory = 8;
};

struct PHarmonicResult {
  KForm eta;
  std::vector<double> coefficients;
  double energy = 0;
  /// max_b |int <|eta|^(p-2) eta, d phi_b>| / (1 + E).
  double el_residual = 0;
  int iterations = 0;
  std::vector<double> energy_history;
};

/// Minimizes E over base + span{d phi_b}: limited-memory BFGS with Armijo backtracking
/// in L^2-orthonormal gauge coordinates, stopping once max_b |gradient_b| <= tol (1 + E).
/// Throws ConvergenceError with the best iterate when the budget runs out.
PHarmonicResult minimize_energy(const SolutionSpace& space, const PHarmonicOptions& options = {});

/// The p-harmonic representative eta with d eta = omega, starting from S omega.
/// Throws NotClosedError unless d omega == 0, ParameterError for p <= 1.
PHarmonicResult p_harmonic_representative(const KForm& omega, const Domain& dom, double p,
                                          int max_degree, const QuadratureConfig& cfg,
                                          const PHarmonicOptions& options = {});

/// inf over theta of ||zeta + d theta||_p with theta in the truncated monomial space.
double quotient_norm(const KForm& zeta, const Domain& dom, double p, int max_degree,
                     const QuadratureConfig& cfg, const PHarmonicOptions& options = {});

struct FinalBoundReport {
  double quotient_norm = 0;
  double omega_norm = 0;
  double ratio = 0;
  double bound = 0;
  bool holds = false;
};

/// quotient_norm(gamma omega) / ||omega||_p on U against
/// sqrt(C(n,k)) (n-k+1) / (C (p(k-1)-n+1)^(1/p)) (n!^((p+1)/p) / (n-k+1)!)^2,
/// C the constant of t.beta. Throws AdmissibilityError for inadmissible (n, k, p).
FinalBoundReport check_final_bound(const KForm& omega, const TransferOperator& t, double p,
                                   int max_degree, const QuadratureConfig& cfg,
                                   const PHarmonicOptions& options = {});

}  // namespace formbound
