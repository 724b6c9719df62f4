#include "formbound/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "formbound/errors.hpp"
#include "formbound/parallel.hpp"

namespace formbound {

namespace {

constexpr std::size_t kChunk = 4096;

Rational factorial(int m) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
  return Rational(f);
}

Rational rational_pow(const Rational& x, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

// Gamma(a + 1/2) / sqrt(pi) = (2a)! / (4^a a!).
Rational half_gamma_over_sqrt_pi(int a) {
  return factorial(2 * a) / (rational_pow(4, a) * factorial(a));
}

bool exact_capable(const Domain& dom) {
  if (const auto* img = std::get_if<Domain::Image>(&dom.kind())) {
    return img->map.is_affine() && exact_capable(*img->base);
  }
  return true;
}

std::optional<Rational> integrate_rational_part(const Polynomial& f, const Domain& dom,
                                                bool& has_pi) {
  const int n = dom.dimension();
  if (std::holds_alternative<Domain::Ball>(dom.kind()) ||
      std::holds_alternative<Domain::Interval>(dom.kind())) {
    const Rational r(dom.radius());
    Rational total = 0;
    for (const auto& [alpha, c] : f.terms()) {
      const int deg = std::accumulate(alpha.begin(), alpha.end(), 0);
      total += c * ball_moment_coefficient(n, alpha) * rational_pow(r, n + deg);
    }
    has_pi = n >= 2;
    return total;
  }
  if (std::holds_alternative<Domain::StandardSimplex>(dom.kind())) {
    Rational total = 0;
    for (const auto& [alpha, c] : f.terms()) total += c * simplex_monomial_moment(alpha);
    has_pi = false;
    return total;
  }
  const auto& img = std::get<Domain::Image>(dom.kind());
  auto det = img.map.constant_jacobian_determinant();
  if (!det) return std::nullopt;
  const Polynomial pulled = f.compose(img.map.components());
  auto base = integrate_rational_part(pulled, *img.base, has_pi);
  if (!base) return std::nullopt;
  return *base * abs(*det);
}

}  // namespace

Rational ball_moment_coefficient(int n, const Exponent& alpha) {
  if (static_cast<int>(alpha.size()) != n) throw DimensionError("moment: exponent length");
  Rational num = 1;
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw ParameterError("moment: negative exponent");
    if (a % 2 != 0) return 0;
    num *= half_gamma_over_sqrt_pi(a / 2);
    total += a;
  }
  const int m = n + total;
  // prod Gamma = pi^(n/2) num; divide by Gamma(1 + m/2). m and n share parity.
  if (m % 2 == 0) return num / factorial(m / 2);
  const int j = (m - 1) / 2;  // Gamma(j + 3/2) = sqrt(pi) (2j+2)! / (4^(j+1) (j+1)!)
  return num * rational_pow(4, j + 1) * factorial(j + 1) / factorial(2 * j + 2);
}

double ball_monomial_moment(int n, const Exponent& alpha, double r) {
  if (static_cast<int>(alpha.size()) != n) throw DimensionError("moment: exponent length");
  double log_num = 0;
  int total = 0;
  for (int a : alpha) {
    if (a % 2 != 0) return 0.0;
    log_num += std::lgamma((a + 1) / 2.0);
    total += a;
  }
  const int m = n + total;
  return std::pow(r, m) * std::exp(log_num - std::lgamma(1.0 + m / 2.0));
}

Rational simplex_monomial_moment(const Exponent& alpha) {
  Rational num = 1;
  int total = 0;
  for (int a : alpha) {
    num *= factorial(a);
    total += a;
  }
  return num / factorial(static_cast<int>(alpha.size()) + total);
}

std::optional<double> integrate_exact(const Polynomial& f, const Domain& dom) {
  if (f.variables() != dom.dimension()) throw DimensionError("integrate_exact: dimension");
  if (!exact_capable(dom)) return std::nullopt;
  bool has_pi = false;
  auto q = integrate_rational_part(f, dom, has_pi);
  if (!q) return std::nullopt;
  const double scale = has_pi ? std::pow(std::numbers::pi, dom.dimension() / 2) : 1.0;
  return q->get_d() * scale;
}

PointSet sample_domain(const Domain& dom, const QuadratureConfig& cfg) {
  const int n = dom.dimension();
  const std::size_t total = cfg.sample_count;
  if (total == 0) throw ParameterError("sample_domain: sample_count must be positive");
  const std::size_t chunks = (total + kChunk - 1) / kChunk;

  const Domain* base = &dom;
  const LipschitzMap* map = nullptr;
  if (const auto* img = std::get_if<Domain::Image>(&dom.kind())) {
    base = img->base.get();
    map = &img->map;
  }
  const auto [lo, hi] = base->bounding_box();
  const double base_volume = base->volume();

  PointSet out;
  out.n = n;
  out.points.resize(total * n);
  out.weights.assign(total, base_volume / static_cast<double>(total));
  std::vector<std::size_t> proposals(chunks, 0);

  parallel_for(chunks, [&](std::size_t c) {
    auto rng = chunk_engine(cfg.seed, c);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(total, begin + kChunk);
    Point x(n);
    for (std::size_t i = begin; i < end; ++i) {
      do {
        for (int d = 0; d < n; ++d) x[d] = lo[d] + (hi[d] - lo[d]) * unit(rng);
        ++proposals[c];
      } while (!base->contains(x));
      if (map != nullptr) {
        out.weights[i] *= std::abs(map->jacobian(x).determinant());
        x = map->apply(x);
      }
      std::copy(x.begin(), x.end(), out.points.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
  });
  out.proposals = std::accumulate(proposals.begin(), proposals.end(), std::size_t{0});
  return out;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
  if (m < 1) throw ParameterError("gauss_legendre: need at least one node");
  std::vector<double> nodes(m), weights(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double derivative = 1;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 1; j <= m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j - 1) * x * p1 - (j - 1) * p2) / j;
      }
      // p0 = P_m(x), p1 = P_{m-1}(x)
      derivative = m * (x * p0 - p1) / (x * x - 1);
      const double step = p0 / derivative;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    weights[i] = weights[m - 1 - i] = 2.0 / ((1 - x * x) * derivative * derivative);
  }
  return {nodes, weights};
}

namespace {

void push_point(PointSet& set, std::initializer_list<double> x, double w) {
  set.points.insert(set.points.end(), x.begin(), x.end());
  set.weights.push_back(w);
}

PointSet ball_rule(int n, double r, int degree) {
  PointSet set;
  set.n = n;
  set.exact = true;
  const int deg = std::max(degree, 0);
  if (n == 1) {
    auto [x, w] = gauss_legendre(deg / 2 + 1);
    for (std::size_t i = 0; i < x.size(); ++i) push_point(set, {r * x[i]}, r * w[i]);
  } else if (n == 2) {
    auto [x, w] = gauss_legendre((deg + 1) / 2 + 1);
    const int m_theta = deg + 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double rho = 0.5 * r * (x[i] + 1);
      const double wr = 0.5 * r * w[i] * rho;
      for (int a = 0; a < m_theta; ++a) {
        const double th = 2 * std::numbers::pi * a / m_theta;
        push_point(set, {rho * std::cos(th), rho * std::sin(th)}, wr * 2 * std::numbers::pi / m_theta);
      }
    }
  } else {
    auto [x, w] = gauss_legendre((deg + 2) / 2 + 1);
    auto [t, wt] = gauss_legendre(deg / 2 + 1);
    const int m_phi = deg + 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double rho = 0.5 * r * (x[i] + 1);
      const double wr = 0.5 * r * w[i] * rho * rho;
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double s = std::sqrt(1 - t[j] * t[j]);
        for (int a = 0; a < m_phi; ++a) {
          const double ph = 2 * std::numbers::pi * a / m_phi;
          push_point(set, {rho * s * std::cos(ph), rho * s * std::sin(ph), rho * t[j]},
                     wr * wt[j] * 2 * std::numbers::pi / m_phi);
        }
      }
    }
  }
  set.proposals = set.size();
  return set;
}

// Collapsed coordinates x_i = u_i prod_{j<i} (1 - u_j), u in [0,1]^n.
PointSet simplex_rule(int n, int degree) {
  auto [g, gw] = gauss_legendre((std::max(degree, 0) + n) / 2 + 1);
  const int m = static_cast<int>(g.size());
  PointSet set;
  set.n = n;
  set.exact = true;
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  while (true) {
    double remaining = 1, weight = 1;
    for (int d = 0; d < n; ++d) {
      const double u = 0.5 * (g[idx[d]] + 1);
      x[d] = remaining * u;
      weight *= 0.5 * gw[idx[d]] * remaining;
      remaining *= 1 - u;
    }
    set.points.insert(set.points.end(), x.begin(), x.end());
    set.weights.push_back(weight);
    int d = n - 1;
    while (d >= 0 && ++idx[d] == m) idx[d--] = 0;
    if (d < 0) break;
  }
  set.proposals = set.size();
  return set;
}

}  // namespace

PointSet cubature_rule(const Domain& dom, int degree, const QuadratureConfig& cfg) {
  const int n = dom.dimension();
  if (std::holds_alternative<Domain::Ball>(dom.kind()) ||
      std::holds_alternative<Domain::Interval>(dom.kind())) {
    if (n <= 3) return ball_rule(n, dom.radius(), degree);
    return sample_domain(dom, cfg);
  }
  if (std::holds_alternative<Domain::StandardSimplex>(dom.kind())) return simplex_rule(n, degree);
  const auto& img = std::get<Domain::Image>(dom.kind());
  // An affine map keeps the degree; otherwise the pushed rule is only approximate.
  PointSet set = cubature_rule(*img.base, degree, cfg);
  if (!img.map.is_affine()) set.exact = false;
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::span<const double> y = set.point(i);
    set.weights[i] *= std::abs(img.map.jacobian(y).determinant());
    const Point x = img.map.apply(y);
    std::copy(x.begin(), x.end(), set.points.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  return set;
}

Estimate integrate(const PointSet& points,
                   const std::function<double(std::span<const double>)>& f) {
  const std::size_t count = points.size();
  std::vector<double> values(count);
  parallel_for(count, [&](std::size_t i) { values[i] = points.weights[i] * f(points.point(i)); });
  Estimate e;
  e.exact = points.exact;
  double sum = 0;
  for (double v : values) sum += v;
  e.value = sum;
  if (!points.exact && count > 1) {
    // Contributions N w_i f_i are i.i.d. estimates of the integral.
    const double n = static_cast<double>(count);
    double ss = 0;
    for (double v : values) ss += (n * v - sum) * (n * v - sum);
    e.std_error = std::sqrt(ss / (n - 1) / n);
  }
  return e;
}

bool is_even_integer(double p) {
  return p >= 2 && p <= 64 && std::floor(p) == p && static_cast<long>(p) % 2 == 0;
}

Estimate lp_norm(const NumericForm& w, const PointSet& points, double p) {
  if (p < 1) throw ParameterError("lp_norm: p must be at least 1");
  if (w.dimension() != points.n) throw DimensionError("lp_norm: dimension mismatch");
  const Estimate integral = integrate(points, [&](std::span<const double> x) {
    return std::pow(w.norm_at(x), p);
  });
  Estimate e;
  e.exact = integral.exact;
  if (integral.value <= 0) return e;
  e.value = std::pow(integral.value, 1.0 / p);
  e.std_error = integral.std_error * e.value / (p * integral.value);
  return e;
}

Estimate lp_norm(const KForm& w, const Domain& dom, double p, const QuadratureConfig& cfg,
                 NormPath path) {
  if (p < 1) throw ParameterError("lp_norm: p must be at least 1");
  if (w.dimension() != dom.dimension()) throw DimensionError("lp_norm: dimension mismatch");
  if (w.is_zero()) return {0.0, 0.0, true};
  const bool can_exact = is_even_integer(p) && exact_capable(dom);
  if (path == NormPath::exact && !can_exact) {
    throw ParameterError("lp_norm: exact path needs even integer p on a polynomial-exact domain");
  }
  if (path != NormPath::monte_carlo && can_exact) {
    const Polynomial integrand = pointwise_norm_sq(w).pow(static_cast<int>(p) / 2);
    const double value = *integrate_exact(integrand, dom);
    return {std::pow(std::max(value, 0.0), 1.0 / p), 0.0, true};
  }
  return lp_norm(NumericForm(w), sample_domain(dom, cfg), p);
}

}  // namespace formbound
