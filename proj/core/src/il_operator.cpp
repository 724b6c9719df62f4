#include "formbound/il_operator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "formbound/constants.hpp"
#include "formbound/errors.hpp"
#include "formbound/parallel.hpp"
#include "formbound/quadrature.hpp"

namespace formbound {

namespace {

constexpr int kPanelOrder = 5;

const std::pair<std::vector<double>, std::vector<double>>& panel_rule() {
  static const auto rule = gauss_legendre(kPanelOrder);
  return rule;
}

double sphere_area(int n) {
  if (n == 1) return 2.0;
  return 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double bump_profile(double u2) { return u2 < 1 ? std::exp(-1.0 / (1.0 - u2)) : 0.0; }

// For each basis k-form dx_J: the (k-1)-form basis slots of i_v dx_J, with the vector
// component feeding each slot and its sign.
struct InteriorEntry {
  std::size_t target;
  int component;
  double sign;
};

std::vector<std::vector<InteriorEntry>> interior_table(int n, int k) {
  const auto source = all_multi_indices(n, k);
  const auto target = all_multi_indices(n, k - 1);
  std::vector<std::vector<InteriorEntry>> table(source.size());
  for (std::size_t a = 0; a < source.size(); ++a) {
    const auto idx = source[a].indices();
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      const MultiIndex rest = source[a].without(idx[pos]);
      const auto it = std::lower_bound(target.begin(), target.end(), rest);
      table[a].push_back({static_cast<std::size_t>(it - target.begin()), idx[pos],
                          pos % 2 == 0 ? 1.0 : -1.0});
    }
  }
  return table;
}

// I_nu = int_0^smax s^(nu-1) phi(z - s u) ds for nu = k..n, into out[nu - k].
// Returns false when phi vanishes on the whole ray.
bool kernel_integrals(const Mollifier& phi, std::span<const double> z, std::span<const double> u,
                      double smax, int k, int panels, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const int n = phi.dimension();
  Point back(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) back[i] = -u[i];
  const auto support = phi.support_on_line(z, back);
  if (!support) return false;
  const double lo = std::max(0.0, support->first);
  const double hi = std::min(smax, support->second);
  if (hi <= lo) return false;
  const auto& [nodes, weights] = panel_rule();
  const double width = (hi - lo) / panels;
  Point y(z.size());
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    for (int q = 0; q < kPanelOrder; ++q) {
      const double s = a + 0.5 * width * (nodes[q] + 1);
      for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i] - s * u[i];
      const double f = phi(y) * 0.5 * width * weights[q];
      if (f == 0) continue;
      double power = std::pow(s, k - 1);
      for (int nu = k; nu <= n; ++nu) {
        out[nu - k] += power * f;
        power *= s;
      }
    }
  }
  return true;
}

struct Direction {
  Point theta;
  double weight;
};

std::vector<Direction> quadrature_directions(int n, int angular) {
  std::vector<Direction> dirs;
  if (n == 1) {
    dirs.push_back({{1.0}, 1.0});
    dirs.push_back({{-1.0}, 1.0});
  } else if (n == 2) {
    for (int a = 0; a < angular; ++a) {
      const double t = 2 * std::numbers::pi * a / angular;
      dirs.push_back({{std::cos(t), std::sin(t)}, 2 * std::numbers::pi / angular});
    }
  } else if (n == 3) {
    const auto [c, w] = gauss_legendre(std::max(1, angular / 2));
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double s = std::sqrt(1 - c[i] * c[i]);
      for (int a = 0; a < angular; ++a) {
        const double t = 2 * std::numbers::pi * a / angular;
        dirs.push_back({{s * std::cos(t), s * std::sin(t), c[i]}, w[i] * 2 * std::numbers::pi / angular});
      }
    }
  } else {
    throw ParameterError("T_apply: quadrature method supports n <= 3; use a Monte Carlo method");
  }
  return dirs;
}

// Adds weight * w(z) <theta * scalar, ...> to out.
void accumulate(const std::vector<std::vector<InteriorEntry>>& table,
                std::span<const double> w_values, std::span<const double> theta, double scalar,
                std::span<double> out) {
  for (std::size_t a = 0; a < table.size(); ++a) {
    const double f = w_values[a] * scalar;
    if (f == 0) continue;
    for (const auto& e : table[a]) out[e.target] += e.sign * theta[e.component] * f;
  }
}

// rho^(n-1) |zeta| along theta at z = x - rho theta: sum C(n-k, nu-k) rho^(n-nu) I_nu.
double radial_kernel(int n, int k, double rho, std::span<const double> integrals) {
  double total = 0;
  for (int nu = k; nu <= n; ++nu) {
    total += binomial(n - k, nu - k) * std::pow(rho, n - nu) * integrals[nu - k];
  }
  return total;
}

}  // namespace

Mollifier::Mollifier(int n, Point center, double scale)
    : n_(n), center_(std::move(center)), scale_(scale), amplitude_(0) {
  if (static_cast<int>(center_.size()) != n) throw DimensionError("Mollifier: center length");
  if (!(scale > 0)) throw ParameterError("Mollifier: scale must be positive");
  // Radial integral of the profile, composite Gauss on [0, 1].
  const auto [x, w] = gauss_legendre(12);
  const int panels = 64;
  double radial = 0;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double r = (p + 0.5 * (x[q] + 1)) / panels;
      radial += 0.5 / panels * w[q] * std::pow(r, n - 1) * bump_profile(r * r);
    }
  }
  amplitude_ = 1.0 / (std::pow(scale, n) * sphere_area(n) * radial);
}

Mollifier Mollifier::for_domain(const Domain& dom) {
  const int n = dom.dimension();
  if (dom.is_ball() || std::holds_alternative<Domain::Interval>(dom.kind())) {
    return Mollifier(n, Point(n, 0.0), 0.5 * dom.radius());
  }
  if (std::holds_alternative<Domain::StandardSimplex>(dom.kind())) {
    const double inradius = 1.0 / (n + std::sqrt(static_cast<double>(n)));
    return Mollifier(n, Point(n, inradius), 0.5 * inradius);
  }
  throw ParameterError("Mollifier: no default placement for " + dom.describe());
}

double Mollifier::operator()(std::span<const double> y) const {
  double u2 = 0;
  for (int i = 0; i < n_; ++i) {
    const double d = (y[i] - center_[i]) / scale_;
    u2 += d * d;
  }
  return u2 < 1 ? amplitude_ * bump_profile(u2) : 0.0;
}

void Mollifier::gradient(std::span<const double> y, std::span<double> out) const {
  double u2 = 0;
  for (int i = 0; i < n_; ++i) {
    const double d = (y[i] - center_[i]) / scale_;
    u2 += d * d;
  }
  if (u2 >= 1) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double f = amplitude_ * bump_profile(u2) * -2.0 / ((1 - u2) * (1 - u2)) / scale_;
  for (int i = 0; i < n_; ++i) out[i] = f * (y[i] - center_[i]) / scale_;
}

double Mollifier::max_gradient() const {
  auto slope = [](double r) { return bump_profile(r * r) * 2 * r / ((1 - r * r) * (1 - r * r)); };
  double best_r = 0, best = 0;
  for (int i = 1; i < 10000; ++i) {
    const double r = i / 10000.0;
    if (slope(r) > best) {
      best = slope(r);
      best_r = r;
    }
  }
  double lo = std::max(0.0, best_r - 1e-4), hi = std::min(1.0 - 1e-12, best_r + 1e-4);
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (slope(m1) < slope(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return amplitude_ / scale_ * std::max(best, slope(0.5 * (lo + hi)));
}

double Mollifier::integral_check(int nodes_per_axis) const {
  const int panels = 8;
  const auto [x, w] = gauss_legendre(std::max(1, nodes_per_axis / panels));
  std::vector<double> nodes, weights;
  const double h = 2 * scale_ / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      nodes.push_back(-scale_ + h * (p + 0.5 * (x[q] + 1)));
      weights.push_back(0.5 * h * w[q]);
    }
  }
  const std::size_t m = nodes.size();
  std::size_t total = 1;
  for (int i = 0; i < n_; ++i) total *= m;
  std::vector<double> partial(m, 0.0);
  // Parallel over the first axis; every slice sums in a fixed order.
  parallel_for(m, [&](std::size_t first) {
    Point y(n_);
    const std::size_t rest = total / m;
    double sum = 0;
    for (std::size_t idx = 0; idx < rest; ++idx) {
      std::size_t code = idx;
      double weight = weights[first];
      y[0] = center_[0] + nodes[first];
      for (int d = 1; d < n_; ++d) {
        const std::size_t j = code % m;
        code /= m;
        y[d] = center_[d] + nodes[j];
        weight *= weights[j];
      }
      sum += weight * (*this)(y);
    }
    partial[first] = sum;
  });
  double total_sum = 0;
  for (double v : partial) total_sum += v;
  return total_sum;
}

std::optional<std::pair<double, double>> Mollifier::support_on_line(
    std::span<const double> origin, std::span<const double> dir) const {
  double b = 0, c = 0;
  for (int i = 0; i < n_; ++i) {
    const double d = origin[i] - center_[i];
    b += d * dir[i];
    c += d * d;
  }
  const double disc = b * b - (c - scale_ * scale_);
  if (disc <= 0) return std::nullopt;
  const double root = std::sqrt(disc);
  return std::make_pair(-b - root, -b + root);
}

std::string Mollifier::describe() const {
  std::ostringstream out;
  out << "bump(center=(";
  for (int i = 0; i < n_; ++i) out << (i ? ", " : "") << center_[i];
  out << "), scale=" << scale_ << ")";
  return out.str();
}

SampledForm::SampledForm(int n, int k, Evaluator evaluate)
    : n_(n), k_(k), basis_(all_multi_indices(n, k)), evaluate_(std::move(evaluate)) {
  if (k < 0 || k > n) throw DegreeError("SampledForm: degree out of range");
}

SampledForm SampledForm::from_kform(const KForm& w) {
  NumericForm numeric(w);
  return SampledForm(w.dimension(), w.degree(),
                     [numeric](std::span<const double> x, std::span<double> out) {
                       numeric.evaluate(x, out);
                     });
}

double zeta_integrand(const Mollifier& phi, std::span<const double> z, std::span<const double> u,
                      double s, int nu) {
  Point y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i] - s * u[i];
  return std::pow(s, nu - 1) * phi(y);
}

Point zeta(std::span<const double> z, std::span<const double> h, int k, const Mollifier& phi,
           const Domain& dom, const QuadratureConfig& cfg) {
  const int n = dom.dimension();
  if (static_cast<int>(z.size()) != n || static_cast<int>(h.size()) != n) {
    throw DimensionError("zeta: point length");
  }
  if (k < 1 || k > n) throw DegreeError("zeta: k out of range");
  double len = 0;
  for (double v : h) len += v * v;
  len = std::sqrt(len);
  if (len == 0) throw SingularityError("zeta: h must be nonzero");
  Point u(n);
  for (int i = 0; i < n; ++i) u[i] = h[i] / len;
  std::vector<double> integrals(n - k + 1);
  Point out(n, 0.0);
  if (!kernel_integrals(phi, z, u, dom.diameter(), k, cfg.t_subdivisions, integrals)) return out;
  double scalar = 0;
  for (int nu = k; nu <= n; ++nu) {
    scalar += binomial(n - k, nu - k) * std::pow(len, 1 - nu) * integrals[nu - k];
  }
  for (int i = 0; i < n; ++i) out[i] = scalar * u[i];
  return out;
}

TValue T_apply(const SampledForm& w, const Mollifier& phi, const Domain& dom,
               std::span<const double> x, const QuadratureConfig& cfg,
               const ILOptions& options) {
  const int n = w.dimension();
  const int k = w.degree();
  if (dom.dimension() != n || phi.dimension() != n || static_cast<int>(x.size()) != n) {
    throw DimensionError("T_apply: dimension mismatch");
  }
  if (k < 1) throw DegreeError("T_apply: T is defined on forms of degree >= 1");
  const auto table = interior_table(n, k);
  const std::size_t out_size = static_cast<std::size_t>(binomial(n, k - 1));
  const double diam = dom.diameter();
  const double eps = options.epsilon * diam;
  const double smax = diam;

  TValue result;
  result.value.assign(out_size, 0.0);
  result.std_error.assign(out_size, 0.0);

  if (options.method == ILOptions::Method::quadrature) {
    const auto dirs = quadrature_directions(n, options.angular);
    const auto [rn, rw] = gauss_legendre(options.radial_order);
    std::vector<std::vector<double>> partial(dirs.size(), std::vector<double>(out_size, 0.0));
    parallel_for(dirs.size(), [&](std::size_t d) {
      const auto& theta = dirs[d].theta;
      Point back(n);
      for (int i = 0; i < n; ++i) back[i] = -theta[i];
      const double rho_max = dom.exit_distance(x, back);
      std::vector<double> integrals(n - k + 1), values(w.size());
      Point z(n);
      const double width = rho_max / options.radial_panels;
      for (int p = 0; p < options.radial_panels; ++p) {
        for (std::size_t q = 0; q < rn.size(); ++q) {
          const double rho = width * (p + 0.5 * (rn[q] + 1));
          for (int i = 0; i < n; ++i) z[i] = x[i] - rho * theta[i];
          if (!kernel_integrals(phi, z, theta, smax, k, cfg.t_subdivisions, integrals)) continue;
          const double scalar = radial_kernel(n, k, rho, integrals);
          if (scalar == 0) continue;
          w.evaluate(z, values);
          accumulate(table, values, theta, scalar * 0.5 * width * rw[q] * dirs[d].weight,
                     partial[d]);
        }
      }
    });
    for (const auto& part : partial) {
      for (std::size_t b = 0; b < out_size; ++b) result.value[b] += part[b];
    }
    return result;
  }

  // Monte Carlo: per-sample contributions, reduced in chunk order.
  const std::size_t total = cfg.sample_count;
  constexpr std::size_t chunk = 2048;
  const std::size_t chunks = (total + chunk - 1) / chunk;
  std::vector<std::vector<double>> sums(chunks, std::vector<double>(out_size, 0.0));
  std::vector<std::vector<double>> squares(chunks, std::vector<double>(out_size, 0.0));
  std::vector<std::size_t> rejected(chunks, 0);
  const double area = sphere_area(n);

  PointSet uniform;
  if (options.method == ILOptions::Method::uniform_monte_carlo) uniform = sample_domain(dom, cfg);

  parallel_for(chunks, [&](std::size_t c) {
    auto rng = chunk_engine(cfg.seed ^ 0x7a11ULL, c);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> integrals(n - k + 1), values(w.size()), contrib(out_size);
    Point theta(n), z(n), back(n);
    const std::size_t begin = c * chunk, end = std::min(total, begin + chunk);
    for (std::size_t s = begin; s < end; ++s) {
      std::fill(contrib.begin(), contrib.end(), 0.0);
      if (options.method == ILOptions::Method::polar_monte_carlo) {
        double len = 0;
        do {
          len = 0;
          for (int i = 0; i < n; ++i) {
            theta[i] = gauss(rng);
            len += theta[i] * theta[i];
          }
        } while (len == 0);
        len = std::sqrt(len);
        for (int i = 0; i < n; ++i) {
          theta[i] /= len;
          back[i] = -theta[i];
        }
        const double rho_max = dom.exit_distance(x, back);
        const double rho = unit(rng) * rho_max;
        if (rho < eps) {
          ++rejected[c];
        } else {
          for (int i = 0; i < n; ++i) z[i] = x[i] - rho * theta[i];
          if (kernel_integrals(phi, z, theta, smax, k, cfg.t_subdivisions, integrals)) {
            const double scalar = radial_kernel(n, k, rho, integrals);
            w.evaluate(z, values);
            accumulate(table, values, theta, scalar * area * rho_max, contrib);
          }
        }
      } else {
        const auto zp = uniform.point(s);
        double len = 0;
        for (int i = 0; i < n; ++i) {
          theta[i] = x[i] - zp[i];
          len += theta[i] * theta[i];
        }
        len = std::sqrt(len);
        if (len < eps) {
          ++rejected[c];
        } else {
          for (int i = 0; i < n; ++i) theta[i] /= len;
          if (kernel_integrals(phi, zp, theta, smax, k, cfg.t_subdivisions, integrals)) {
            // <zeta, .> with zeta = theta * sum C |h|^(1-nu) I_nu.
            double scalar = 0;
            for (int nu = k; nu <= n; ++nu) {
              scalar += binomial(n - k, nu - k) * std::pow(len, 1 - nu) * integrals[nu - k];
            }
            w.evaluate(zp, values);
            accumulate(table, values, theta, scalar * uniform.weights[s] * static_cast<double>(total),
                       contrib);
          }
        }
      }
      for (std::size_t b = 0; b < out_size; ++b) {
        sums[c][b] += contrib[b];
        squares[c][b] += contrib[b] * contrib[b];
      }
    }
  });
  const double count = static_cast<double>(total);
  for (std::size_t b = 0; b < out_size; ++b) {
    double sum = 0, sq = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      sum += sums[c][b];
      sq += squares[c][b];
    }
    const double mean = sum / count;
    result.value[b] = mean;
    if (total > 1) {
      result.std_error[b] = std::sqrt(std::max(0.0, (sq / count - mean * mean) / (count - 1)));
    }
  }
  for (auto r : rejected) result.rejected += r;
  return result;
}

std::vector<double> dT_apply(const SampledForm& w, const Mollifier& phi, const Domain& dom,
                             std::span<const double> x, const QuadratureConfig& cfg,
                             const ILOptions& options) {
  const int n = w.dimension();
  const int k = w.degree();
  const double h = 1e-3 * dom.diameter();
  const auto lower = all_multi_indices(n, k - 1);
  const auto upper = all_multi_indices(n, k);
  std::vector<double> out(upper.size(), 0.0);
  Point xp(x.begin(), x.end()), xm(x.begin(), x.end());
  for (int i = 0; i < n; ++i) {
    xp[i] += h;
    xm[i] -= h;
    const TValue plus = T_apply(w, phi, dom, xp, cfg, options);
    const TValue minus = T_apply(w, phi, dom, xm, cfg, options);
    xp[i] = xm[i] = x[i];
    for (std::size_t b = 0; b < lower.size(); ++b) {
      const double partial = (plus.value[b] - minus.value[b]) / (2 * h);
      const auto joined = lower[b].prepend(i);
      if (!joined) continue;
      const auto it = std::lower_bound(upper.begin(), upper.end(), joined->second);
      out[static_cast<std::size_t>(it - upper.begin())] += joined->first * partial;
    }
  }
  return out;
}

std::vector<SmoothFormCase> smooth_form_suite(int n) {
  std::vector<SmoothFormCase> suite;
  auto poly_case = [&](std::string name, const KForm& w) {
    std::optional<SampledForm> dw;
    if (w.degree() < w.dimension()) dw = SampledForm::from_kform(exterior_derivative(w));
    suite.push_back({std::move(name), SampledForm::from_kform(w), std::move(dw)});
  };
  const auto x = [n](int i) { return Polynomial::variable(n, i); };
  if (n == 2) {
    poly_case("dx1", KForm::basis(2, {0}));
    KForm w(2, 1);
    w.add(MultiIndex(2, {0}), x(0) * x(1));
    w.add(MultiIndex(2, {1}), x(1) * x(1));
    poly_case("x1x2 dx1 + x2^2 dx2", w);
    suite.push_back(
        {"sin(x1)cos(x2) dx1 + exp(x1x2) dx2",
         SampledForm(2, 1,
                     [](std::span<const double> p, std::span<double> out) {
                       out[0] = std::sin(p[0]) * std::cos(p[1]);
                       out[1] = std::exp(p[0] * p[1]);
                     }),
         SampledForm(2, 2, [](std::span<const double> p, std::span<double> out) {
           out[0] = p[1] * std::exp(p[0] * p[1]) + std::sin(p[0]) * std::sin(p[1]);
         })});
    poly_case("(1 + x1^2) dx1dx2", (Polynomial::constant(2, 1) + x(0) * x(0)) * KForm::basis(2, {0, 1}));
    suite.push_back({"exp(x1)sin(x2) dx1dx2",
                     SampledForm(2, 2,
                                 [](std::span<const double> p, std::span<double> out) {
                                   out[0] = std::exp(p[0]) * std::sin(p[1]);
                                 }),
                     std::nullopt});
  } else if (n == 3) {
    poly_case("dx1", KForm::basis(3, {0}));
    KForm w(3, 2);
    w.add(MultiIndex(3, {0, 1}), x(2));
    w.add(MultiIndex(3, {1, 2}), x(0) * x(1));
    poly_case("x3 dx1dx2 + x1x2 dx2dx3", w);
    // Components in order dx1, dx2, dx3 and dx12, dx13, dx23.
    suite.push_back(
        {"exp(x3) dx1 + sin(x1) dx3",
         SampledForm(3, 1,
                     [](std::span<const double> p, std::span<double> out) {
                       out[0] = std::exp(p[2]);
                       out[1] = 0.0;
                       out[2] = std::sin(p[0]);
                     }),
         SampledForm(3, 2, [](std::span<const double> p, std::span<double> out) {
           out[0] = 0.0;
           out[1] = std::cos(p[0]) - std::exp(p[2]);
           out[2] = 0.0;
         })});
    suite.push_back({"sin(x1) dx2dx3",
                     SampledForm(3, 2,
                                 [](std::span<const double> p, std::span<double> out) {
                                   out[0] = 0.0;
                                   out[1] = 0.0;
                                   out[2] = std::sin(p[0]);
                                 }),
                     SampledForm(3, 3, [](std::span<const double> p, std::span<double> out) {
                       out[0] = std::cos(p[0]);
                     })});
    suite.push_back({"cos(x1x2x3) dx1dx2dx3",
                     SampledForm(3, 3,
                                 [](std::span<const double> p, std::span<double> out) {
                                   out[0] = std::cos(p[0] * p[1] * p[2]);
                                 }),
                     std::nullopt});
  } else {
    throw DimensionError("smooth_form_suite: available for n = 2 and n = 3");
  }
  return suite;
}

double il_homotopy_residual(const SmoothFormCase& c, const Mollifier& phi, const Domain& dom,
                            const QuadratureConfig& cfg, const ILOptions& options,
                            std::size_t points) {
  const int n = c.form.dimension();
  QuadratureConfig pick = cfg;
  pick.sample_count = points;
  const PointSet xs = sample_domain(Domain::ball(n, 0.75 * dom.radius()), pick);
  const std::size_t size = c.form.size();
  double residual = 0, norm = 0;
  std::vector<double> w(size), dw(c.derivative ? c.derivative->size() : 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto x = xs.point(i);
    c.form.evaluate(x, w);
    std::vector<double> r = w;
    const auto dtw = dT_apply(c.form, phi, dom, x, cfg, options);
    for (std::size_t b = 0; b < size; ++b) r[b] -= dtw[b];
    if (c.derivative) {
      const TValue tdw = T_apply(*c.derivative, phi, dom, x, cfg, options);
      for (std::size_t b = 0; b < size; ++b) r[b] -= tdw.value[b];
    }
    for (std::size_t b = 0; b < size; ++b) {
      residual += r[b] * r[b];
      norm += w[b] * w[b];
    }
  }
  return norm > 0 ? std::sqrt(residual / norm) : std::sqrt(residual);
}

DiscretizedT discretize_T(int n, int k, double p, double q, int grid, const Mollifier& phi,
                          const Domain& dom, const QuadratureConfig& cfg,
                          bool allow_inadmissible) {
  if (dom.dimension() != n || phi.dimension() != n) throw DimensionError("discretize_T: dimension");
  if (k < 1 || k > n) throw DegreeError("discretize_T: k out of range");
  if (p < 1 || q < 1) throw ParameterError("discretize_T: p and q must be at least 1");
  if (!(1.0 / p - 1.0 / q < 1.0 / n) && !allow_inadmissible) {
    throw ParameterError("discretize_T: needs 1/p - 1/q < 1/n");
  }
  if (grid < 3) throw ParameterError("discretize_T: grid must be at least 3");

  const auto [lo, hi] = dom.bounding_box();
  Point step(n), fine(n);
  for (int d = 0; d < n; ++d) {
    step[d] = (hi[d] - lo[d]) / (grid - 1);
    fine[d] = step[d] / 2;
  }

  // Interior hat nodes.
  std::vector<Point> nodes;
  {
    std::vector<int> idx(n, 0);
    Point y(n);
    while (true) {
      bool interior = true;
      for (int d = 0; d < n; ++d) {
        y[d] = lo[d] + idx[d] * step[d];
        if (idx[d] == 0 || idx[d] == grid - 1) interior = false;
      }
      if (interior && dom.contains(y)) nodes.push_back(y);
      int d = n - 1;
      while (d >= 0 && ++idx[d] == grid) idx[d--] = 0;
      if (d < 0) break;
    }
  }
  // Cell midpoints of the half-step grid inside D.
  std::vector<Point> quad;
  double cell = 1;
  for (int d = 0; d < n; ++d) cell *= fine[d];
  {
    const int m = 2 * (grid - 1);
    std::vector<int> idx(n, 0);
    Point y(n);
    while (true) {
      for (int d = 0; d < n; ++d) y[d] = lo[d] + (idx[d] + 0.5) * fine[d];
      if (dom.contains(y)) quad.push_back(y);
      int d = n - 1;
      while (d >= 0 && ++idx[d] == m) idx[d--] = 0;
      if (d < 0) break;
    }
  }
  const auto N = static_cast<Eigen::Index>(nodes.size());
  const auto M = static_cast<Eigen::Index>(quad.size());
  if (N == 0) throw ParameterError("discretize_T: grid too coarse for the domain");

  auto hat = [&](const Point& node, const Point& y) {
    double v = 1;
    for (int d = 0; d < n; ++d) v *= std::max(0.0, 1 - std::abs(y[d] - node[d]) / step[d]);
    return v;
  };
  // Nonzero hats at each quadrature point.
  std::vector<std::vector<std::pair<Eigen::Index, double>>> support(quad.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(M, N);
  for (Eigen::Index i = 0; i < M; ++i) {
    for (Eigen::Index a = 0; a < N; ++a) {
      const double v = hat(nodes[a], quad[i]);
      if (v > 0) {
        support[i].emplace_back(a, v);
        P(i, a) = v;
      }
    }
  }

  // R_d(i, :) = sum_{j != i} zeta_d(z_j, x_i - z_j) w_j P(j, :).
  std::vector<Eigen::MatrixXd> R(n, Eigen::MatrixXd::Zero(M, N));
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
    Point h(n);
    for (Eigen::Index j = 0; j < M; ++j) {
      if (static_cast<std::size_t>(j) == i) continue;
      for (int d = 0; d < n; ++d) h[d] = quad[i][d] - quad[j][d];
      const Point z = zeta(quad[j], h, k, phi, dom, cfg);
      bool zero = true;
      for (double v : z) zero = zero && v == 0;
      if (zero) continue;
      for (const auto& [a, v] : support[j]) {
        for (int d = 0; d < n; ++d) R[d](static_cast<Eigen::Index>(i), a) += z[d] * cell * v;
      }
    }
  });

  const Eigen::MatrixXd mass = cell * P.transpose() * P;
  const Eigen::LLT<Eigen::MatrixXd> chol(mass);
  if (chol.info() != Eigen::Success) throw ParameterError("discretize_T: singular mass matrix");
  const Eigen::MatrixXd L = chol.matrixL();

  std::vector<Eigen::MatrixXd> G(n);
  for (int d = 0; d < n; ++d) {
    // L^-1 (P^T W R_d) L^-T
    Eigen::MatrixXd a = cell * P.transpose() * R[d];
    a = L.triangularView<Eigen::Lower>().solve(a);
    G[d] = L.triangularView<Eigen::Lower>().solve(a.transpose()).transpose();
  }

  const auto table = interior_table(n, k);
  const auto targets = static_cast<Eigen::Index>(binomial(n, k - 1));
  const auto sources = static_cast<Eigen::Index>(table.size());
  DiscretizedT out;
  out.matrix = Eigen::MatrixXd::Zero(targets * N, sources * N);
  for (Eigen::Index a = 0; a < sources; ++a) {
    for (const auto& e : table[a]) {
      out.matrix.block(static_cast<Eigen::Index>(e.target) * N, a * N, N, N) += e.sign * G[e.component];
    }
  }
  out.trial_nodes = nodes.size();
  out.quadrature_points = quad.size();
  return out;
}

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

}  // namespace formbound
