#include "formbound/lipschitz_map.hpp"

#include <string>

#include "formbound/errors.hpp"

namespace formbound {

LipschitzMap LipschitzMap::polynomial(std::vector<Polynomial> components,
                                      double lipschitz_constant) {
  const int n = static_cast<int>(components.size());
  if (n == 0) throw DimensionError("LipschitzMap: no components");
  for (const auto& c : components) {
    if (c.variables() != n) {
      throw DimensionError("LipschitzMap: component in " + std::to_string(c.variables()) +
                           " variables for a map of R^" + std::to_string(n));
    }
  }
  if (!(lipschitz_constant > 0)) throw ParameterError("LipschitzMap: constant must be positive");
  LipschitzMap m;
  m.n_ = n;
  m.lipschitz_constant_ = lipschitz_constant;
  m.jacobian_entries_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.jacobian_entries_[i].push_back(components[i].derivative(j));
  }
  m.components_ = std::move(components);

  std::vector<NumericPolynomial> values;
  std::vector<std::vector<NumericPolynomial>> partials(n);
  for (int i = 0; i < n; ++i) {
    values.emplace_back(m.components_[i]);
    for (int j = 0; j < n; ++j) partials[i].emplace_back(m.jacobian_entries_[i][j]);
  }
  m.evaluate_ = [values](std::span<const double> x) {
    Point y(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) y[i] = values[i](x);
    return y;
  };
  m.jacobian_ = [partials](std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(partials.size());
    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) jac(i, j) = partials[i][j](x);
    }
    return jac;
  };
  return m;
}

double spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

LipschitzMap LipschitzMap::affine(const std::vector<std::vector<Rational>>& matrix,
                                  const std::vector<Rational>& offset,
                                  std::optional<double> lipschitz_constant) {
  const int n = static_cast<int>(matrix.size());
  if (static_cast<int>(offset.size()) != n) throw DimensionError("affine: offset length");
  std::vector<Polynomial> components;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(matrix[i].size()) != n) throw DimensionError("affine: matrix not square");
    Polynomial c = Polynomial::constant(n, offset[i]);
    for (int j = 0; j < n; ++j) {
      c += matrix[i][j] * Polynomial::variable(n, j);
      a(i, j) = matrix[i][j].get_d();
    }
    components.push_back(std::move(c));
  }
  // Round the computed norm up so it stays a certificate after floating error.
  const double c = lipschitz_constant.value_or(spectral_norm(a) * (1.0 + 1e-12));
  return polynomial(std::move(components), c);
}

LipschitzMap LipschitzMap::identity(int n) { return scaling(n, 1); }

LipschitzMap LipschitzMap::scaling(int n, const Rational& factor) {
  std::vector<Polynomial> components;
  for (int i = 0; i < n; ++i) components.push_back(factor * Polynomial::variable(n, i));
  return polynomial(std::move(components), std::abs(factor.get_d()));
}

LipschitzMap LipschitzMap::numeric(int n, Evaluator evaluate, JacobianEvaluator jacobian,
                                   double lipschitz_constant) {
  if (!(lipschitz_constant > 0)) throw ParameterError("LipschitzMap: constant must be positive");
  LipschitzMap m;
  m.n_ = n;
  m.lipschitz_constant_ = lipschitz_constant;
  m.evaluate_ = std::move(evaluate);
  m.jacobian_ = std::move(jacobian);
  return m;
}

bool LipschitzMap::is_affine() const {
  if (!is_polynomial()) return false;
  for (const auto& c : components_) {
    if (c.degree() > 1) return false;
  }
  return true;
}

const std::vector<Polynomial>& LipschitzMap::components() const {
  if (!is_polynomial()) {
    throw UnsupportedMapError("LipschitzMap: map has no polynomial components");
  }
  return components_;
}

Point LipschitzMap::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw DimensionError("LipschitzMap::apply: wrong length");
  return evaluate_(x);
}

Eigen::MatrixXd LipschitzMap::jacobian(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) {
    throw DimensionError("LipschitzMap::jacobian: wrong length");
  }
  return jacobian_(x);
}

std::optional<Rational> LipschitzMap::constant_jacobian_determinant() const {
  if (!is_affine()) return std::nullopt;
  std::vector<std::vector<Rational>> m(n_, std::vector<Rational>(n_));
  const Exponent origin(n_, 0);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) m[i][j] = jacobian_entries_[i][j].coefficient(origin);
  }
  Rational det = 1;
  for (int col = 0; col < n_; ++col) {
    int pivot = col;
    while (pivot < n_ && m[pivot][col] == 0) ++pivot;
    if (pivot == n_) return Rational(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < n_; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (int c = col; c < n_; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

LipschitzMap LipschitzMap::with_inverse(LipschitzMap inverse) const {
  if (inverse.dimension() != n_) throw DimensionError("with_inverse: dimension mismatch");
  LipschitzMap out = *this;
  out.inverse_ = std::make_shared<const LipschitzMap>(std::move(inverse));
  return out;
}

LipschitzMap compose(const LipschitzMap& outer, const LipschitzMap& inner) {
  if (outer.dimension() != inner.dimension()) throw DimensionError("compose: dimension mismatch");
  const double c = outer.lipschitz_constant() * inner.lipschitz_constant();
  if (outer.is_polynomial() && inner.is_polynomial()) {
    std::vector<Polynomial> components;
    for (const auto& p : outer.components()) components.push_back(p.compose(inner.components()));
    return LipschitzMap::polynomial(std::move(components), c);
  }
  return LipschitzMap::numeric(
      outer.dimension(),
      [outer, inner](std::span<const double> x) { return outer.apply(inner.apply(x)); },
      [outer, inner](std::span<const double> x) {
        const Point y = inner.apply(x);
        return Eigen::MatrixXd(outer.jacobian(y) * inner.jacobian(x));
      },
      c);
}

}  // namespace formbound
