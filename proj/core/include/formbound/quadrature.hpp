#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "formbound/domain.hpp"
#include "formbound/kform.hpp"

namespace formbound {

/// A numeric result with its Monte Carlo standard error (0 on exact paths).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

/// Integral of x^alpha over the centered ball B(r) in R^n.
double ball_monomial_moment(int n, const Exponent& alpha, double r);

/// Rational q with integral of x^alpha over B(1) in R^n equal to q * pi^floor(n/2).
Rational ball_moment_coefficient(int n, const Exponent& alpha);

/// Integral of x^alpha over the standard simplex: prod(alpha_i!) / (n + |alpha|)!.
Rational simplex_monomial_moment(const Exponent& alpha);

/// Exact integral of f over balls, intervals, the simplex and affine images of those;
/// nullopt for other domains. Rounded to double once, at the end.
std::optional<double> integrate_exact(const Polynomial& f, const Domain& dom);

/// Weighted point set: sum_i weights[i] * f(point(i)) approximates the integral of f.
struct PointSet {
  int n = 0;
  std::vector<double> points;  // row-major, n per point
  std::vector<double> weights;
  /// Rejection-sampling proposals drawn (equals size() for exact rules).
  std::size_t proposals = 0;
  /// True for cubature rules that integrate polynomials up to their degree exactly.
  bool exact = false;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

/// cfg.sample_count uniform points in dom, each weighted vol/N. Ball, interval and
/// simplex use rejection from the bounding box; images sample the base and push forward
/// with weight |det J|. Chunks are seeded from (cfg.seed, chunk), so the set does not
/// depend on the thread count.
PointSet sample_domain(const Domain& dom, const QuadratureConfig& cfg);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m);

/// Product rule exact for polynomials of total degree <= degree on balls (n <= 3),
/// intervals, simplices and affine images of those; falls back to sample_domain.
PointSet cubature_rule(const Domain& dom, int degree, const QuadratureConfig& cfg);

/// Weighted sum with standard error from the spread of the per-point contributions.
/// The error is meaningful only for sampled sets.
Estimate integrate(const PointSet& points, const std::function<double(std::span<const double>)>& f);

enum class NormPath { automatic, exact, monte_carlo };

/// (integral of |w|_x^p)^(1/p). The automatic path is exact for even integer p on
/// domains integrate_exact supports and Monte Carlo otherwise.
/// Throws ParameterError for p < 1 or an impossible exact request, DimensionError on mismatch.
Estimate lp_norm(const KForm& w, const Domain& dom, double p, const QuadratureConfig& cfg,
                 NormPath path = NormPath::automatic);

/// Norm over a given point set; the standard error follows from the delta method.
Estimate lp_norm(const NumericForm& w, const PointSet& points, double p);

/// True when p is an even integer small enough for the exact polynomial path.
bool is_even_integer(double p);

}  // namespace formbound
