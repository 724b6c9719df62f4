#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>

#include "formbound/lipschitz_map.hpp"

namespace formbound {

/// Sampling and quadrature knobs shared by every numeric routine.
struct QuadratureConfig {
  std::size_t sample_count = 100000;
  std::uint64_t seed = 42;
  int t_subdivisions = 16;
};

/// Reads `key = value` lines (samples, seed, t-steps); `#` starts a comment.
/// Unknown keys throw ParseError.
QuadratureConfig load_quadrature_config(const std::filesystem::path& path,
                                        QuadratureConfig base = {});

/// Bounded domain in R^n: a centered ball, an interval [-r, r], the standard simplex
/// {x >= 0, sum x <= 1}, or the image of one of those under a bi-Lipschitz map.
class Domain {
 public:
  struct Ball {
    double radius;
  };
  struct Interval {
    double half_width;
  };
  struct StandardSimplex {};
  struct Image {
    std::shared_ptr<const Domain> base;
    LipschitzMap map;  // base -> image; carries its inverse when known
  };
  using Kind = std::variant<Ball, Interval, StandardSimplex, Image>;

  static Domain ball(int n, double radius);
  static Domain interval(double half_width);
  static Domain standard_simplex(int n);
  /// map(base). The map should carry its inverse so that membership can be tested.
  static Domain image(const Domain& base, LipschitzMap map);

  int dimension() const { return n_; }
  const Kind& kind() const { return kind_; }
  bool is_ball() const { return std::holds_alternative<Ball>(kind_); }
  /// Radius of a Ball or half width of an Interval; throws ParameterError otherwise.
  double radius() const;

  double diameter() const;
  /// Exact for the primitive kinds and affine images; sampled otherwise.
  double volume() const;
  bool contains(std::span<const double> x) const;
  /// Largest t >= 0 with x + t u still in the (convex) domain, for unit u and x inside.
  /// Throws ParameterError for non-affine images.
  double exit_distance(std::span<const double> x, std::span<const double> u) const;
  /// Bounding box [lo, hi] used by rejection sampling.
  std::pair<Point, Point> bounding_box() const;
  std::string describe() const;

 private:
  Domain(int n, Kind kind) : n_(n), kind_(std::move(kind)) {}
  int n_;
  Kind kind_;
};

}  // namespace formbound
