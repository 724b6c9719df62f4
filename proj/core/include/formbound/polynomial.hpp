#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace formbound {

using Rational = mpq_class;
/// Exponent vector (a1, ..., an) of the monomial x1^a1 ... xn^an.
using Exponent = std::vector<int>;

/// Sparse multivariate polynomial in n variables with exact rational coefficients.
///
/// Canonical: zero coefficients are never stored, so structural equality is equality
/// of polynomials.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial constant(int n, const Rational& c);
  /// The coordinate function x_i (zero-based i).
  static Polynomial variable(int n, int i);
  static Polynomial monomial(int n, const Exponent& e, const Rational& c = 1);

  int variables() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  Rational coefficient(const Exponent& e) const;

  /// Adds c * x^e, dropping the term if it cancels.
  void add_term(const Exponent& e, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  bool operator==(const Polynomial& other) const = default;

  Polynomial pow(int e) const;
  /// Partial derivative with respect to x_i.
  Polynomial derivative(int i) const;
  /// x_i * this.
  Polynomial times_variable(int i) const;
  /// Part of total degree exactly m.
  Polynomial homogeneous_part(int m) const;
  /// Substitutes x_i -> components[i]; the result lives in components' variable count.
  Polynomial compose(std::span<const Polynomial> components) const;
  /// p(t x) as a polynomial in x: the degree-m part scaled by t^m.
  Polynomial scale_argument(const Rational& t) const;

  Rational evaluate(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;

 private:
  void check_same(const Polynomial& other) const;

  int n_ = 0;
  TermMap terms_;
};

/// Floating-point image of a Polynomial laid out for fast repeated evaluation.
class NumericPolynomial {
 public:
  NumericPolynomial() = default;
  explicit NumericPolynomial(const Polynomial& p);

  int variables() const { return n_; }
  int degree() const { return degree_; }
  bool is_zero() const { return coefficients_.empty(); }
  double operator()(std::span<const double> x) const;
  /// Value and gradient at x.
  double value_and_gradient(std::span<const double> x, std::span<double> gradient) const;

 private:
  int n_ = 0;
  int degree_ = -1;
  std::vector<double> coefficients_;
  std::vector<int> exponents_;  // row-major, n_ per term
};

}  // namespace formbound
