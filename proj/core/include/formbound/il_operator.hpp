#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "formbound/domain.hpp"
#include "formbound/kform.hpp"

namespace formbound {

/// Smooth bump A exp(-1 / (1 - |u|^2)), u = (y - center) / scale, with unit integral.
class Mollifier {
 public:
  Mollifier(int n, Point center, double scale);
  /// Centered in dom with scale half its inradius-like radius: 0.5 r for balls and
  /// intervals, 0.5 of the inscribed radius about the barycenter for the simplex.
  static Mollifier for_domain(const Domain& dom);

  int dimension() const { return n_; }
  const Point& center() const { return center_; }
  double scale() const { return scale_; }
  double normalization() const { return amplitude_; }

  double operator()(std::span<const double> y) const;
  void gradient(std::span<const double> y, std::span<double> out) const;
  /// sup |grad phi|, from the one-dimensional radial profile.
  double max_gradient() const;
  /// Integral of phi by a tensor Gauss rule over the support box, independent of the
  /// radial normalization.
  double integral_check(int nodes_per_axis = 96) const;
  /// Open interval of t where phi(origin + t dir) > 0 for unit dir; nullopt if empty.
  std::optional<std::pair<double, double>> support_on_line(std::span<const double> origin,
                                                           std::span<const double> dir) const;
  std::string describe() const;

 private:
  int n_;
  Point center_;
  double scale_;
  double amplitude_;
};

/// A k-form known only through pointwise evaluation of its C(n, k) components, listed in
/// all_multi_indices(n, k) order.
class SampledForm {
 public:
  using Evaluator = std::function<void(std::span<const double>, std::span<double>)>;

  SampledForm(int n, int k, Evaluator evaluate);
  static SampledForm from_kform(const KForm& w);

  int dimension() const { return n_; }
  int degree() const { return k_; }
  std::size_t size() const { return basis_.size(); }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  void evaluate(std::span<const double> x, std::span<double> out) const { evaluate_(x, out); }

 private:
  int n_;
  int k_;
  std::vector<MultiIndex> basis_;
  Evaluator evaluate_;
};

/// s^(nu-1) phi(z - s u) for unit u: the integrand of the kernel's s-integral.
double zeta_integrand(const Mollifier& phi, std::span<const double> z, std::span<const double> u,
                      double s, int nu);

/// zeta(z, h) = sum_{nu=k}^{n} C(n-k, nu-k) h / |h|^nu int_0^diam s^(nu-1) phi(z - s h/|h|) ds,
/// by composite Gauss-Legendre with cfg.t_subdivisions panels over the part of [0, diam D]
/// where phi is nonzero. Throws SingularityError for h = 0.
Point zeta(std::span<const double> z, std::span<const double> h, int k, const Mollifier& phi,
           const Domain& dom, const QuadratureConfig& cfg);

struct ILOptions {
  enum class Method {
    /// Polar coordinates about x with Gauss rules; deterministic (n <= 3).
    quadrature,
    /// Polar coordinates about x, uniform random directions and radii.
    polar_monte_carlo,
    /// z uniform in D; samples with |x - z| < epsilon are rejected.
    uniform_monte_carlo
  };
  Method method = Method::quadrature;
  /// Angular nodes: directions for n = 2, azimuthal nodes for n = 3 (half as many polar).
  int angular = 64;
  int radial_panels = 4;
  int radial_order = 8;
  /// Exclusion radius around x relative to diam D.
  double epsilon = 1e-6;
};

/// (T w)(x) as C(n, k-1) components, with standard errors (zero for quadrature).
struct TValue {
  std::vector<double> value;
  std::vector<double> std_error;
  std::size_t rejected = 0;
};

/// (T w)(x) = int_D w(z) <zeta(z, x - z), ...> dz for convex dom and x in dom.
/// Monte Carlo methods reuse the sample stream of cfg.seed for every x.
TValue T_apply(const SampledForm& w, const Mollifier& phi, const Domain& dom,
               std::span<const double> x, const QuadratureConfig& cfg,
               const ILOptions& options = {});

/// d(T w)(x) by central differences with step 1e-3 diam D.
std::vector<double> dT_apply(const SampledForm& w, const Mollifier& phi, const Domain& dom,
                             std::span<const double> x, const QuadratureConfig& cfg,
                             const ILOptions& options = {});

/// A smooth test form together with its exterior derivative (absent for k = n).
struct SmoothFormCase {
  std::string name;
  SampledForm form;
  std::optional<SampledForm> derivative;
};

/// The fixed suite of five smooth forms for n = 2 or n = 3.
std::vector<SmoothFormCase> smooth_form_suite(int n);

/// Relative discrete L^2 size of w - dTw - Tdw over `points` seeded points of the
/// ball of radius 0.75 r.
double il_homotopy_residual(const SmoothFormCase& c, const Mollifier& phi, const Domain& dom,
                            const QuadratureConfig& cfg, const ILOptions& options = {},
                            std::size_t points = 48);

/// Galerkin discretization of T: k-forms -> (k-1)-forms on tensor hat functions with
/// `grid` nodes per axis over the bounding box (nodes inside D only), expressed in
/// L^2-orthonormal coordinates so that its singular values approximate those of T.
struct DiscretizedT {
  Eigen::MatrixXd matrix;
  std::size_t trial_nodes = 0;
  std::size_t quadrature_points = 0;
};

/// Requires 1/p - 1/q < 1/n unless allow_inadmissible; throws ParameterError otherwise.
DiscretizedT discretize_T(int n, int k, double p, double q, int grid, const Mollifier& phi,
                          const Domain& dom, const QuadratureConfig& cfg,
                          bool allow_inadmissible = false);

/// Singular values, nonincreasing.
std::vector<double> singular_values(const Eigen::MatrixXd& m);

}  // namespace formbound
