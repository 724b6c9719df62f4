#include "formbound/transfer.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "formbound/constants.hpp"
#include "formbound/errors.hpp"
#include "formbound/homotopy.hpp"
#include "formbound/parallel.hpp"
#include "formbound/pullback.hpp"
#include "formbound/quadrature.hpp"

namespace formbound {

Domain TransferOperator::outer() const {
  return Domain::image(inner, alpha.with_inverse(beta));
}

TransferOperator make_transfer(const LipschitzMap& alpha, const LipschitzMap& beta,
                               double inner_radius) {
  if (alpha.dimension() != beta.dimension()) throw DimensionError("transfer: dimension mismatch");
  const int n = alpha.dimension();
  const LipschitzMap round_trip = compose(alpha, beta);
  for (int i = 0; i < n; ++i) {
    if (!(round_trip.components()[i] == Polynomial::variable(n, i))) {
      throw ParameterError("transfer: alpha o beta is not the identity");
    }
  }
  return {alpha, beta, Domain::ball(n, inner_radius)};
}

KForm transfer_gamma(const TransferOperator& t, const KForm& w) {
  if (w.degree() < w.dimension() && !exterior_derivative(w).is_zero()) {
    throw NotClosedError("transfer_gamma: form is not closed");
  }
  return pullback(t.beta, homotopy_S(pullback(t.alpha, w)));
}

double homotopy_bound(int n, int k, double p, double r) {
  if (n == 1) return bound_interval(r);
  if (k == 1) return bound_one_form(n, p, r);
  return bound_ball(n, k, p, r);
}

double pullback_norm_bound(int n, int j, double p, double c_map, double c_inverse) {
  return factorial_d(n) / factorial_d(n - j) * std::pow(c_map, j) *
         std::pow(factorial_d(n) * std::pow(c_inverse, n), 1.0 / p);
}

double transfer_bound(const TransferOperator& t, int k, double p) {
  const int n = t.alpha.dimension();
  const double c_alpha = t.alpha.lipschitz_constant();
  const double c_beta = t.beta.lipschitz_constant();
  const double m = homotopy_bound(n, k, p, t.inner.radius());
  return pullback_norm_bound(n, k - 1, p, c_beta, c_alpha) * m *
         pullback_norm_bound(n, k, p, c_alpha, c_beta);
}

std::pair<Point, double> simplex_ball(int n) {
  Point b(n, 1.0 / (n + 1));
  // Vertex e_i is the farthest from b.
  const double r = std::sqrt(static_cast<double>(n * n + n - 1)) / (n + 1);
  return {b, r};
}

namespace {

struct SimplexGeometry {
  int n;
  Point center;
  double radius;
  std::vector<Point> normals;  // outward unit normals
  std::vector<double> offsets;  // distance from center to each facet

  explicit SimplexGeometry(int dim) : n(dim) {
    std::tie(center, radius) = simplex_ball(dim);
    for (int i = 0; i < n; ++i) {
      Point nu(n, 0.0);
      nu[i] = -1.0;
      normals.push_back(nu);
      offsets.push_back(1.0 / (n + 1));
    }
    normals.emplace_back(n, 1.0 / std::sqrt(static_cast<double>(n)));
    offsets.push_back(1.0 / ((n + 1) * std::sqrt(static_cast<double>(n))));
  }

  // Facet hit first by the ray from the center along d; maximizes <d, nu> / offset.
  std::size_t active_facet(std::span<const double> d) const {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < normals.size(); ++f) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += d[i] * normals[f][i];
      if (s / offsets[f] > best_value) {
        best_value = s / offsets[f];
        best = f;
      }
    }
    return best;
  }
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LipschitzMap simplex_map(int n) {
  if (n < 2) throw DimensionError("simplex_map: needs n >= 2");
  const auto geo = std::make_shared<const SimplexGeometry>(n);

  // x -> b + (R / offset_f) <d, nu_f> d / |d|, d = x - b.
  auto forward = [geo](std::span<const double> x) {
    const int dim = geo->n;
    Point d(dim);
    for (int i = 0; i < dim; ++i) d[i] = x[i] - geo->center[i];
    const double len = std::sqrt(dot(d, d));
    Point y = geo->center;
    if (len == 0) return y;
    const std::size_t f = geo->active_facet(d);
    const double scale = geo->radius / geo->offsets[f] * dot(d, geo->normals[f]) / len;
    for (int i = 0; i < dim; ++i) y[i] += scale * d[i];
    return y;
  };
  auto forward_jacobian = [geo](std::span<const double> x) {
    const int dim = geo->n;
    Eigen::VectorXd d(dim);
    for (int i = 0; i < dim; ++i) d[i] = x[i] - geo->center[i];
    const double len = d.norm();
    const std::size_t f = geo->active_facet(std::span<const double>(d.data(), dim));
    const Eigen::Map<const Eigen::VectorXd> nu(geo->normals[f].data(), dim);
    const double c = geo->radius / geo->offsets[f];
    if (len == 0) return Eigen::MatrixXd(c * Eigen::MatrixXd::Identity(dim, dim));
    const double dn = d.dot(nu);
    Eigen::MatrixXd jac = d * nu.transpose() / len +
                          dn * (Eigen::MatrixXd::Identity(dim, dim) / len -
                                d * d.transpose() / (len * len * len));
    return Eigen::MatrixXd(c * jac);
  };
  // y -> b + (offset_f / R) |e| e / <e, nu_f>, e = y - b; same facet as e's direction.
  auto backward = [geo](std::span<const double> y) {
    const int dim = geo->n;
    Point e(dim);
    for (int i = 0; i < dim; ++i) e[i] = y[i] - geo->center[i];
    const double len = std::sqrt(dot(e, e));
    Point x = geo->center;
    if (len == 0) return x;
    const std::size_t f = geo->active_facet(e);
    const double scale = geo->offsets[f] / geo->radius * len / dot(e, geo->normals[f]);
    for (int i = 0; i < dim; ++i) x[i] += scale * e[i];
    return x;
  };
  auto backward_jacobian = [geo](std::span<const double> y) {
    const int dim = geo->n;
    Eigen::VectorXd e(dim);
    for (int i = 0; i < dim; ++i) e[i] = y[i] - geo->center[i];
    const double len = e.norm();
    const std::size_t f = geo->active_facet(std::span<const double>(e.data(), dim));
    const Eigen::Map<const Eigen::VectorXd> nu(geo->normals[f].data(), dim);
    const double c = geo->offsets[f] / geo->radius;
    if (len == 0) return Eigen::MatrixXd(c * Eigen::MatrixXd::Identity(dim, dim));
    const double en = e.dot(nu);
    Eigen::MatrixXd jac = e * e.transpose() / (len * en) +
                          len / en * Eigen::MatrixXd::Identity(dim, dim) -
                          len * e * nu.transpose() / (en * en);
    return Eigen::MatrixXd(c * jac);
  };

  // No closed form for the inverse constant: take the sampled supremum of its Jacobian
  // over the ball with a 10% margin.
  const double radius = geo->radius;
  LipschitzMap probe = LipschitzMap::numeric(
      n,
      [geo, backward, radius](std::span<const double> u) {
        Point y(u.begin(), u.end());
        for (int i = 0; i < geo->n; ++i) y[i] = geo->center[i] + radius * y[i];
        return backward(y);
      },
      [geo, backward_jacobian, radius](std::span<const double> u) {
        Point y(u.begin(), u.end());
        for (int i = 0; i < geo->n; ++i) y[i] = geo->center[i] + radius * y[i];
        return Eigen::MatrixXd(radius * backward_jacobian(y));
      },
      1.0);
  const double inverse_constant =
      1.1 * sampled_jacobian_norm(probe, Domain::ball(n, 1.0), 20000, 7) / radius;

  LipschitzMap inverse = LipschitzMap::numeric(n, backward, backward_jacobian, inverse_constant);
  return LipschitzMap::numeric(n, forward, forward_jacobian, static_cast<double>(n * n))
      .with_inverse(std::move(inverse));
}

double sampled_lipschitz_quotient(const LipschitzMap& phi, const Domain& dom, std::size_t pairs,
                                  std::uint64_t seed) {
  QuadratureConfig cfg;
  cfg.sample_count = 2 * pairs;
  cfg.seed = seed;
  const PointSet pts = sample_domain(dom, cfg);
  std::vector<double> worst(pairs, 0.0);
  parallel_for(pairs, [&](std::size_t i) {
    const auto u = pts.point(2 * i);
    const auto v = pts.point(2 * i + 1);
    const Point fu = phi.apply(u);
    const Point fv = phi.apply(v);
    double num = 0, den = 0;
    for (int c = 0; c < pts.n; ++c) {
      num += (fu[c] - fv[c]) * (fu[c] - fv[c]);
      den += (u[c] - v[c]) * (u[c] - v[c]);
    }
    if (den > 0) worst[i] = std::sqrt(num / den);
  });
  return *std::max_element(worst.begin(), worst.end());
}

double sampled_jacobian_norm(const LipschitzMap& phi, const Domain& dom, std::size_t samples,
                             std::uint64_t seed) {
  QuadratureConfig cfg;
  cfg.sample_count = samples;
  cfg.seed = seed;
  const PointSet pts = sample_domain(dom, cfg);
  std::vector<double> worst(samples, 0.0);
  parallel_for(samples, [&](std::size_t i) { worst[i] = spectral_norm(phi.jacobian(pts.point(i))); });
  return *std::max_element(worst.begin(), worst.end());
}

double sampled_inverse_defect(const LipschitzMap& phi, const Domain& dom, std::size_t samples,
                              std::uint64_t seed) {
  const LipschitzMap* inv = phi.inverse();
  if (inv == nullptr) throw UnsupportedMapError("sampled_inverse_defect: map has no inverse");
  QuadratureConfig cfg;
  cfg.sample_count = samples;
  cfg.seed = seed;
  const PointSet pts = sample_domain(dom, cfg);
  std::vector<double> worst(samples, 0.0);
  parallel_for(samples, [&](std::size_t i) {
    const Point y = phi.apply(pts.point(i));
    const Point back = phi.apply(inv->apply(y));
    double s = 0;
    for (int c = 0; c < pts.n; ++c) s += (back[c] - y[c]) * (back[c] - y[c]);
    worst[i] = std::sqrt(s);
  });
  return *std::max_element(worst.begin(), worst.end());
}

}  // namespace formbound
