#pragma once

#include <map>
#include <span>
#include <vector>

#include "formbound/multi_index.hpp"
#include "formbound/polynomial.hpp"

namespace formbound {

/// Degree-k differential form on R^n with polynomial coefficients,
/// sum_J f_J dx_J over strictly increasing multi-indices J.
///
/// Immutable in practice: every operation returns a new canonical form (no zero
/// coefficients stored), so == is semantic equality.
class KForm {
 public:
  using CoefficientMap = std::map<MultiIndex, Polynomial>;

  KForm() = default;
  /// The zero k-form on R^n. Throws DegreeError unless 0 <= k <= n.
  KForm(int n, int k);

  static KForm zero(int n, int k) { return KForm(n, k); }
  /// f dx_J; J holds zero-based indices.
  static KForm monomial(const Polynomial& f, const MultiIndex& J);
  /// dx_{j1} ^ ... ^ dx_{jk}.
  static KForm basis(int n, const std::vector<int>& indices);
  static KForm function(const Polynomial& f);

  int dimension() const { return n_; }
  int degree() const { return k_; }
  const CoefficientMap& coefficients() const { return coeffs_; }
  Polynomial coefficient(const MultiIndex& J) const;
  bool is_zero() const { return coeffs_.empty(); }
  /// Largest total degree among the coefficients; -1 for the zero form.
  int polynomial_degree() const;

  /// Adds f dx_J.
  void add(const MultiIndex& J, const Polynomial& f);

  KForm operator-() const;
  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(const Rational& c);
  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(KForm a, const Rational& c) { return a *= c; }
  friend KForm operator*(const Rational& c, KForm a) { return a *= c; }
  /// Coefficientwise product with a function.
  friend KForm operator*(const Polynomial& f, const KForm& w);
  bool operator==(const KForm& other) const = default;

  /// Part whose coefficients are homogeneous of degree m.
  KForm homogeneous_part(int m) const;

 private:
  void check_compatible(const KForm& other) const;

  int n_ = 0;
  int k_ = 0;
  CoefficientMap coeffs_;
};

KForm wedge(const KForm& a, const KForm& b);
KForm exterior_derivative(const KForm& w);
/// Contraction with the radial field sum_i x_i d/dx_i, first slot, standard sign convention.
KForm interior_radial(const KForm& w);
/// |w|_x^2 = sum_J f_J(x)^2.
Polynomial pointwise_norm_sq(const KForm& w);
/// w_x(v_1, ..., v_k) in exact arithmetic.
Rational evaluate(const KForm& w, std::span<const Rational> x,
                  std::span<const std::vector<Rational>> vectors);

/// Floating-point image of a KForm for repeated pointwise evaluation.
class NumericForm {
 public:
  NumericForm() = default;
  explicit NumericForm(const KForm& w);

  int dimension() const { return n_; }
  int degree() const { return k_; }
  /// Components in the order of all_multi_indices(n, k).
  const std::vector<MultiIndex>& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }
  /// Writes all C(n, k) component values at x into out.
  void evaluate(std::span<const double> x, std::span<double> out) const;
  double norm_at(std::span<const double> x) const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<MultiIndex> basis_;
  std::vector<NumericPolynomial> components_;
};

}  // namespace formbound
