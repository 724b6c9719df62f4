#include "formbound/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "formbound/errors.hpp"

namespace formbound {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ParseError("config: bad value for " + key);
  return value;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

}  // namespace

QuadratureConfig load_quadrature_config(const std::filesystem::path& path, QuadratureConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "samples") {
      base.sample_count = parse_number<std::size_t>(value, key);
    } else if (key == "seed") {
      base.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "t-steps") {
      base.t_subdivisions = parse_number<int>(value, key);
    } else {
      throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (base.sample_count == 0) throw ParameterError("config: samples must be positive");
  if (base.t_subdivisions <= 0) throw ParameterError("config: t-steps must be positive");
  return base;
}

Domain Domain::ball(int n, double radius) {
  if (n < 1) throw DimensionError("ball: dimension must be positive");
  if (!(radius > 0)) throw ParameterError("ball: radius must be positive");
  return Domain(n, Ball{radius});
}

Domain Domain::interval(double half_width) {
  if (!(half_width > 0)) throw ParameterError("interval: half width must be positive");
  return Domain(1, Interval{half_width});
}

Domain Domain::standard_simplex(int n) {
  if (n < 1) throw DimensionError("simplex: dimension must be positive");
  return Domain(n, StandardSimplex{});
}

Domain Domain::image(const Domain& base, LipschitzMap map) {
  if (map.dimension() != base.dimension()) throw DimensionError("image: map dimension");
  return Domain(base.n_, Image{std::make_shared<const Domain>(base), std::move(map)});
}

double Domain::radius() const {
  if (const auto* b = std::get_if<Ball>(&kind_)) return b->radius;
  if (const auto* i = std::get_if<Interval>(&kind_)) return i->half_width;
  throw ParameterError("radius: domain is not a ball");
}

double Domain::diameter() const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball>) {
          return 2 * k.radius;
        } else if constexpr (std::is_same_v<K, Interval>) {
          return 2 * k.half_width;
        } else if constexpr (std::is_same_v<K, StandardSimplex>) {
          return n_ == 1 ? 1.0 : std::sqrt(2.0);
        } else {
          if (k.map.is_affine()) {
            // Image of a convex set: diameter is attained on images of extreme points.
            if (k.base->is_ball()) {
              const Point origin(n_, 0.0);
              return k.base->diameter() * spectral_norm(k.map.jacobian(origin));
            }
            if (std::holds_alternative<StandardSimplex>(k.base->kind())) {
              std::vector<Point> vertices(1, Point(n_, 0.0));
              for (int i = 0; i < n_; ++i) {
                Point v(n_, 0.0);
                v[i] = 1.0;
                vertices.push_back(v);
              }
              double d = 0;
              for (auto& v : vertices) v = k.map.apply(v);
              for (std::size_t i = 0; i < vertices.size(); ++i) {
                for (std::size_t j = i + 1; j < vertices.size(); ++j) {
                  double s = 0;
                  for (int c = 0; c < n_; ++c) s += std::pow(vertices[i][c] - vertices[j][c], 2);
                  d = std::max(d, std::sqrt(s));
                }
              }
              return d;
            }
          }
          return k.base->diameter() * k.map.lipschitz_constant();
        }
      },
      kind_);
}

double Domain::volume() const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball>) {
          return unit_ball_volume(n_) * std::pow(k.radius, n_);
        } else if constexpr (std::is_same_v<K, Interval>) {
          return 2 * k.half_width;
        } else if constexpr (std::is_same_v<K, StandardSimplex>) {
          return 1.0 / std::tgamma(n_ + 1.0);
        } else {
          if (auto det = k.map.constant_jacobian_determinant()) {
            return std::abs(det->get_d()) * k.base->volume();
          }
          // Mean |det J| over a fixed uniform sample of the base.
          auto [lo, hi] = k.base->bounding_box();
          std::mt19937_64 rng(0x5eed);
          std::uniform_real_distribution<double> unit(0.0, 1.0);
          Point x(n_);
          double sum = 0;
          std::size_t accepted = 0;
          while (accepted < 200000) {
            for (int i = 0; i < n_; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
            if (!k.base->contains(x)) continue;
            sum += std::abs(k.map.jacobian(x).determinant());
            ++accepted;
          }
          return k.base->volume() * sum / static_cast<double>(accepted);
        }
      },
      kind_);
}

bool Domain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw DimensionError("contains: wrong point length");
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball>) {
          double s = 0;
          for (double v : x) s += v * v;
          return s <= k.radius * k.radius;
        } else if constexpr (std::is_same_v<K, Interval>) {
          return std::abs(x[0]) <= k.half_width;
        } else if constexpr (std::is_same_v<K, StandardSimplex>) {
          double s = 0;
          for (double v : x) {
            if (v < 0) return false;
            s += v;
          }
          return s <= 1.0;
        } else {
          const LipschitzMap* inv = k.map.inverse();
          if (inv == nullptr) {
            throw UnsupportedMapError("contains: image domain needs the inverse map");
          }
          return k.base->contains(inv->apply(x));
        }
      },
      kind_);
}

double Domain::exit_distance(std::span<const double> x, std::span<const double> u) const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball> || std::is_same_v<K, Interval>) {
          const double r = radius();
          double xu = 0, xx = 0;
          for (int i = 0; i < n_; ++i) {
            xu += x[i] * u[i];
            xx += x[i] * x[i];
          }
          const double disc = xu * xu - (xx - r * r);
          return std::max(0.0, -xu + std::sqrt(std::max(0.0, disc)));
        } else if constexpr (std::is_same_v<K, StandardSimplex>) {
          double t = std::numeric_limits<double>::infinity();
          double su = 0, sx = 0;
          for (int i = 0; i < n_; ++i) {
            if (u[i] < 0) t = std::min(t, -x[i] / u[i]);
            su += u[i];
            sx += x[i];
          }
          if (su > 0) t = std::min(t, (1.0 - sx) / su);
          return std::max(0.0, t);
        } else {
          if (!k.map.is_affine() || k.map.inverse() == nullptr) {
            throw ParameterError("exit_distance: needs an affine image with known inverse");
          }
          // Pull the ray back: the inverse is affine, so rays map to rays.
          const LipschitzMap& inv = *k.map.inverse();
          const Point y = inv.apply(x);
          const Eigen::MatrixXd a = inv.jacobian(y);
          Eigen::VectorXd v = a * Eigen::Map<const Eigen::VectorXd>(u.data(), n_);
          const double len = v.norm();
          if (len == 0) return 0.0;
          v /= len;
          const Point dir(v.data(), v.data() + n_);
          return k.base->exit_distance(y, dir) / len;
        }
      },
      kind_);
}

std::pair<Point, Point> Domain::bounding_box() const {
  return std::visit(
      [&](const auto& k) -> std::pair<Point, Point> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball> || std::is_same_v<K, Interval>) {
          const double r = radius();
          return {Point(n_, -r), Point(n_, r)};
        } else if constexpr (std::is_same_v<K, StandardSimplex>) {
          return {Point(n_, 0.0), Point(n_, 1.0)};
        } else {
          // phi(base) lies within C * diam(base) of phi(any base point).
          auto [lo, hi] = k.base->bounding_box();
          Point mid(n_);
          for (int i = 0; i < n_; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
          if (!k.base->contains(mid)) mid = lo;
          const Point c = k.map.apply(mid);
          const double reach = k.map.lipschitz_constant() * k.base->diameter();
          Point l(n_), h(n_);
          for (int i = 0; i < n_; ++i) {
            l[i] = c[i] - reach;
            h[i] = c[i] + reach;
          }
          return {l, h};
        }
      },
      kind_);
}

std::string Domain::describe() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball>) {
          out << "ball(n=" << n_ << ", r=" << k.radius << ")";
        } else if constexpr (std::is_same_v<K, Interval>) {
          out << "interval(r=" << k.half_width << ")";
        } else if constexpr (std::is_same_v<K, StandardSimplex>) {
          out << "simplex(n=" << n_ << ")";
        } else {
          out << "image(" << k.base->describe() << ", C=" << k.map.lipschitz_constant() << ")";
        }
      },
      kind_);
  return out.str();
}

}  // namespace formbound
