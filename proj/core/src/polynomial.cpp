#include "formbound/polynomial.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "formbound/errors.hpp"

namespace formbound {

Polynomial Polynomial::constant(int n, const Rational& c) {
  Polynomial p(n);
  p.add_term(Exponent(n, 0), c);
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  if (i < 0 || i >= n) throw DimensionError("Polynomial::variable: index out of range");
  Exponent e(n, 0);
  e[i] = 1;
  return monomial(n, e);
}

Polynomial Polynomial::monomial(int n, const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != n) {
    throw DimensionError("Polynomial::monomial: exponent length differs from variable count");
  }
  Polynomial p(n);
  p.add_term(e, c);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  }
  return d;
}

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != n_) {
    throw DimensionError("Polynomial: exponent of length " + std::to_string(e.size()) +
                         " in a polynomial of " + std::to_string(n_) + " variables");
  }
  if (c == 0) return;
  // Callers may hand in mpq values built from (num, den) without reduction.
  Rational v = c;
  v.canonicalize();
  auto [it, inserted] = terms_.try_emplace(e, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_same(const Polynomial& other) const {
  if (n_ != other.n_) {
    throw DimensionError("Polynomial: variable counts differ (" + std::to_string(n_) + " vs " +
                         std::to_string(other.n_) + ")");
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  Rational f = c;
  f.canonicalize();
  for (auto& [e, v] : terms_) v *= f;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  Polynomial out(a.n_);
  Exponent e(a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw ParameterError("Polynomial::pow: negative exponent");
  Polynomial result = constant(n_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(int i) const {
  if (i < 0 || i >= n_) throw DimensionError("Polynomial::derivative: index out of range");
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent d = e;
    --d[i];
    out.add_term(d, c * e[i]);
  }
  return out;
}

Polynomial Polynomial::times_variable(int i) const {
  if (i < 0 || i >= n_) throw DimensionError("Polynomial::times_variable: index out of range");
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    Exponent d = e;
    ++d[i];
    out.terms_.emplace_hint(out.terms_.end(), std::move(d), c);
  }
  return out;
}

Polynomial Polynomial::homogeneous_part(int m) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (std::accumulate(e.begin(), e.end(), 0) == m) out.terms_.emplace(e, c);
  }
  return out;
}

Polynomial Polynomial::compose(std::span<const Polynomial> components) const {
  if (static_cast<int>(components.size()) != n_) {
    throw DimensionError("Polynomial::compose: expected " + std::to_string(n_) + " components");
  }
  const int m = n_ == 0 ? 0 : components[0].variables();
  for (const auto& c : components) {
    if (c.variables() != m) throw DimensionError("Polynomial::compose: mixed variable counts");
  }
  // Cache powers of each component; exponents in practice stay small.
  std::vector<std::vector<Polynomial>> powers(n_);
  auto power = [&](int i, int e) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(constant(m, 1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * components[i]);
    return cache[e];
  };
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(m, c);
    for (int i = 0; i < n_; ++i) {
      if (e[i] > 0) term = term * power(i, e[i]);
    }
    out += term;
  }
  return out;
}

Polynomial Polynomial::scale_argument(const Rational& t) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    const int m = std::accumulate(e.begin(), e.end(), 0);
    Rational factor = 1;
    for (int j = 0; j < m; ++j) factor *= t;
    out.add_term(e, c * factor);
  }
  return out;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != n_) {
    throw DimensionError("Polynomial::evaluate: point has wrong dimension");
  }
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < e[i]; ++j) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> x) const {
  return NumericPolynomial(*this)(x);
}

NumericPolynomial::NumericPolynomial(const Polynomial& p) : n_(p.variables()), degree_(p.degree()) {
  coefficients_.reserve(p.terms().size());
  exponents_.reserve(p.terms().size() * n_);
  for (const auto& [e, c] : p.terms()) {
    coefficients_.push_back(c.get_d());
    exponents_.insert(exponents_.end(), e.begin(), e.end());
  }
}

namespace {

// Integer power by repeated squaring; exponents are small.
inline double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

}  // namespace

double NumericPolynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) {
    throw DimensionError("NumericPolynomial: point has wrong dimension");
  }
  double sum = 0.0;
  const int* e = exponents_.data();
  for (double c : coefficients_) {
    double term = c;
    for (int i = 0; i < n_; ++i) {
      if (e[i] != 0) term *= ipow(x[i], e[i]);
    }
    sum += term;
    e += n_;
  }
  return sum;
}

double NumericPolynomial::value_and_gradient(std::span<const double> x,
                                             std::span<double> gradient) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(gradient.size()) != n_) {
    throw DimensionError("NumericPolynomial: point has wrong dimension");
  }
  std::fill(gradient.begin(), gradient.end(), 0.0);
  double sum = 0.0;
  const int* e = exponents_.data();
  for (double c : coefficients_) {
    double term = c;
    for (int i = 0; i < n_; ++i) {
      if (e[i] != 0) term *= ipow(x[i], e[i]);
    }
    sum += term;
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      double partial = c * e[i] * ipow(x[i], e[i] - 1);
      for (int j = 0; j < n_; ++j) {
        if (j != i && e[j] != 0) partial *= ipow(x[j], e[j]);
      }
      gradient[i] += partial;
    }
    e += n_;
  }
  return sum;
}

}  // namespace formbound
