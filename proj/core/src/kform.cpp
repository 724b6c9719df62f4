#include "formbound/kform.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "formbound/errors.hpp"

namespace formbound {

KForm::KForm(int n, int k) : n_(n), k_(k) {
  if (n < 0 || n > MultiIndex::kMaxDimension) throw DimensionError("KForm: bad dimension");
  if (k < 0 || k > n) {
    throw DegreeError("KForm: degree " + std::to_string(k) + " outside [0, " +
                      std::to_string(n) + "]");
  }
}

KForm KForm::monomial(const Polynomial& f, const MultiIndex& J) {
  KForm w(J.dimension(), J.degree());
  w.add(J, f);
  return w;
}

KForm KForm::basis(int n, const std::vector<int>& indices) {
  return monomial(Polynomial::constant(n, 1), MultiIndex(n, indices));
}

KForm KForm::function(const Polynomial& f) {
  return monomial(f, MultiIndex::empty(f.variables()));
}

Polynomial KForm::coefficient(const MultiIndex& J) const {
  auto it = coeffs_.find(J);
  return it == coeffs_.end() ? Polynomial(n_) : it->second;
}

int KForm::polynomial_degree() const {
  int d = -1;
  for (const auto& [J, f] : coeffs_) d = std::max(d, f.degree());
  return d;
}

void KForm::add(const MultiIndex& J, const Polynomial& f) {
  if (J.dimension() != n_ || f.variables() != n_) {
    throw DimensionError("KForm::add: component lives in a different dimension");
  }
  if (J.degree() != k_) throw DegreeError("KForm::add: component has the wrong degree");
  if (f.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(J, f);
  if (!inserted) {
    it->second += f;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

void KForm::check_compatible(const KForm& other) const {
  if (n_ != other.n_) throw DimensionError("KForm: dimensions differ");
  if (k_ != other.k_) throw DegreeError("KForm: degrees differ");
}

KForm KForm::operator-() const {
  KForm out = *this;
  for (auto& [J, f] : out.coeffs_) f = -f;
  return out;
}

KForm& KForm::operator+=(const KForm& other) {
  check_compatible(other);
  for (const auto& [J, f] : other.coeffs_) add(J, f);
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  check_compatible(other);
  for (const auto& [J, f] : other.coeffs_) add(J, -f);
  return *this;
}

KForm& KForm::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [J, f] : coeffs_) f *= c;
  return *this;
}

KForm operator*(const Polynomial& f, const KForm& w) {
  KForm out(w.n_, w.k_);
  for (const auto& [J, g] : w.coeffs_) out.add(J, f * g);
  return out;
}

KForm KForm::homogeneous_part(int m) const {
  KForm out(n_, k_);
  for (const auto& [J, f] : coeffs_) out.add(J, f.homogeneous_part(m));
  return out;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.dimension() != b.dimension()) throw DimensionError("wedge: dimensions differ");
  if (a.degree() + b.degree() > a.dimension()) {
    throw DegreeError("wedge: degree " + std::to_string(a.degree() + b.degree()) +
                      " exceeds dimension " + std::to_string(a.dimension()));
  }
  const int n = a.dimension();
  KForm out(n, a.degree() + b.degree());
  for (const auto& [I, f] : a.coefficients()) {
    for (const auto& [J, g] : b.coefficients()) {
      const int sign = shuffle_sign(I, J);
      if (sign == 0) continue;
      Polynomial product = f * g;
      if (sign < 0) product = -product;
      out.add(MultiIndex::from_mask(n, I.mask() | J.mask()), product);
    }
  }
  return out;
}

KForm exterior_derivative(const KForm& w) {
  const int n = w.dimension();
  if (w.degree() >= n) {
    throw DegreeError("exterior_derivative: no (n+1)-forms on R^" + std::to_string(n));
  }
  KForm out(n, w.degree() + 1);
  for (const auto& [J, f] : w.coefficients()) {
    for (int i = 0; i < n; ++i) {
      auto prepended = J.prepend(i);
      if (!prepended) continue;
      Polynomial partial = f.derivative(i);
      if (partial.is_zero()) continue;
      if (prepended->first < 0) partial = -partial;
      out.add(prepended->second, partial);
    }
  }
  return out;
}

KForm interior_radial(const KForm& w) {
  if (w.degree() == 0) throw DegreeError("interior_radial: cannot contract a 0-form");
  const int n = w.dimension();
  KForm out(n, w.degree() - 1);
  for (const auto& [J, f] : w.coefficients()) {
    int position = 0;
    for (int j : J.indices()) {
      Polynomial term = f.times_variable(j);
      if (position % 2 == 1) term = -term;
      out.add(J.without(j), term);
      ++position;
    }
  }
  return out;
}

Polynomial pointwise_norm_sq(const KForm& w) {
  Polynomial sum(w.dimension());
  for (const auto& [J, f] : w.coefficients()) sum += f * f;
  return sum;
}

Rational evaluate(const KForm& w, std::span<const Rational> x,
                  std::span<const std::vector<Rational>> vectors) {
  const int n = w.dimension();
  const int k = w.degree();
  if (static_cast<int>(x.size()) != n) throw DimensionError("evaluate: point has wrong length");
  if (static_cast<int>(vectors.size()) != k) {
    throw DimensionError("evaluate: expected " + std::to_string(k) + " tangent vectors");
  }
  for (const auto& v : vectors) {
    if (static_cast<int>(v.size()) != n) throw DimensionError("evaluate: vector has wrong length");
  }
  Rational total = 0;
  for (const auto& [J, f] : w.coefficients()) {
    // k x k minor det[v_a(j_b)] by exact Gaussian elimination.
    const auto idx = J.indices();
    std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) m[a][b] = vectors[a][idx[b]];
    }
    Rational det = 1;
    for (int col = 0; col < k && det != 0; ++col) {
      int pivot = col;
      while (pivot < k && m[pivot][col] == 0) ++pivot;
      if (pivot == k) {
        det = 0;
        break;
      }
      if (pivot != col) {
        std::swap(m[pivot], m[col]);
        det = -det;
      }
      det *= m[col][col];
      for (int r = col + 1; r < k; ++r) {
        if (m[r][col] == 0) continue;
        Rational factor = m[r][col] / m[col][col];
        for (int c = col; c < k; ++c) m[r][c] -= factor * m[col][c];
      }
    }
    if (det != 0) total += f.evaluate(x) * det;
  }
  return total;
}

NumericForm::NumericForm(const KForm& w)
    : n_(w.dimension()), k_(w.degree()), basis_(all_multi_indices(n_, k_)) {
  components_.reserve(basis_.size());
  for (const auto& J : basis_) components_.emplace_back(w.coefficient(J));
}

void NumericForm::evaluate(std::span<const double> x, std::span<double> out) const {
  if (out.size() != basis_.size()) throw DimensionError("NumericForm: output has wrong size");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    out[i] = components_[i].is_zero() ? 0.0 : components_[i](x);
  }
}

double NumericForm::norm_at(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& c : components_) {
    if (c.is_zero()) continue;
    const double v = c(x);
    sum += v * v;
  }
  return std::sqrt(sum);
}

}  // namespace formbound
