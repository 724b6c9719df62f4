#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "formbound/polynomial.hpp"

namespace formbound {

using Point = std::vector<double>;

/// Map phi: R^n -> R^n with a certified Lipschitz constant C, i.e.
/// |phi(x) - phi(x')| <= C |x - x'| on the domain it is used on.
///
/// Polynomial maps keep their exact components and take part in exact pullbacks;
/// general maps only carry numeric evaluators.
class LipschitzMap {
 public:
  using Evaluator = std::function<Point(std::span<const double>)>;
  using JacobianEvaluator = std::function<Eigen::MatrixXd(std::span<const double>)>;

  /// Exact polynomial map. Throws DimensionError unless there are n components in n variables.
  static LipschitzMap polynomial(std::vector<Polynomial> components, double lipschitz_constant);
  /// x -> A x + b with rational entries. C defaults to the spectral norm of A.
  static LipschitzMap affine(const std::vector<std::vector<Rational>>& matrix,
                             const std::vector<Rational>& offset,
                             std::optional<double> lipschitz_constant = std::nullopt);
  static LipschitzMap identity(int n);
  static LipschitzMap scaling(int n, const Rational& factor);
  /// Map known only through evaluators; excluded from the exact path.
  static LipschitzMap numeric(int n, Evaluator evaluate, JacobianEvaluator jacobian,
                              double lipschitz_constant);

  int dimension() const { return n_; }
  double lipschitz_constant() const { return lipschitz_constant_; }
  bool is_polynomial() const { return !components_.empty(); }
  /// Polynomial of total degree <= 1 in every component.
  bool is_affine() const;
  /// Throws UnsupportedMapError for numeric maps.
  const std::vector<Polynomial>& components() const;

  Point apply(std::span<const double> x) const;
  Eigen::MatrixXd jacobian(std::span<const double> x) const;
  /// Jacobian determinant of an affine map (exact); nullopt otherwise.
  std::optional<Rational> constant_jacobian_determinant() const;

  /// Attaches the inverse map (alpha for beta); shared, immutable.
  LipschitzMap with_inverse(LipschitzMap inverse) const;
  const LipschitzMap* inverse() const { return inverse_.get(); }

 private:
  int n_ = 0;
  double lipschitz_constant_ = 0.0;
  std::vector<Polynomial> components_;
  std::vector<std::vector<Polynomial>> jacobian_entries_;
  Evaluator evaluate_;
  JacobianEvaluator jacobian_;
  std::shared_ptr<const LipschitzMap> inverse_;
};

/// outer o inner; exact when both are polynomial, constants multiply.
LipschitzMap compose(const LipschitzMap& outer, const LipschitzMap& inner);

/// Largest singular value of A.
double spectral_norm(const Eigen::MatrixXd& a);

}  // namespace formbound
