#include "formbound/random_forms.hpp"

#include <cmath>

#include "formbound/errors.hpp"

namespace formbound {
namespace {

void exponents_of_degree(int n, int degree, int position, Exponent& current,
                         std::vector<Exponent>& out) {
  if (position == n - 1) {
    current[position] = degree;
    out.push_back(current);
    return;
  }
  for (int a = degree; a >= 0; --a) {
    current[position] = a;
    exponents_of_degree(n, degree - a, position + 1, current, out);
  }
}

Rational random_coefficient(const RandomFormOptions& options, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-options.numerator_bound, options.numerator_bound);
  std::uniform_int_distribution<int> den(1, options.denominator_bound);
  int p = 0;
  while (p == 0) p = num(rng);
  Rational c(p, den(rng));
  c.canonicalize();
  return c;
}

}  // namespace

std::vector<Exponent> exponents_up_to(int n, int max_degree) {
  std::vector<Exponent> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  Exponent current(n, 0);
  for (int d = 0; d <= max_degree; ++d) exponents_of_degree(n, d, 0, current, out);
  return out;
}

Polynomial random_polynomial(int n, const RandomFormOptions& options, std::mt19937_64& rng) {
  const auto exponents = exponents_up_to(n, options.max_degree);
  std::bernoulli_distribution keep(options.density);
  Polynomial p(n);
  for (const auto& e : exponents) {
    if (keep(rng)) p.add_term(e, random_coefficient(options, rng));
  }
  if (p.is_zero()) {
    std::uniform_int_distribution<std::size_t> pick(0, exponents.size() - 1);
    p.add_term(exponents[pick(rng)], random_coefficient(options, rng));
  }
  return p;
}

KForm random_form(int n, int k, const RandomFormOptions& options, std::mt19937_64& rng) {
  KForm w(n, k);
  const auto basis = all_multi_indices(n, k);
  std::bernoulli_distribution use_component(0.7);
  for (const auto& J : basis) {
    if (use_component(rng)) w.add(J, random_polynomial(n, options, rng));
  }
  if (w.is_zero()) {
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    w.add(basis[pick(rng)], random_polynomial(n, options, rng));
  }
  return w;
}

KForm random_closed_form(int n, int k, const RandomFormOptions& options, std::mt19937_64& rng) {
  if (k < 1 || k > n) throw DegreeError("random_closed_form: need 1 <= k <= n");
  RandomFormOptions primitive = options;
  primitive.max_degree = options.max_degree + 1;
  // d kills constants in degree 0, so retry until the result is nonzero.
  for (int attempt = 0; attempt < 64; ++attempt) {
    KForm w = exterior_derivative(random_form(n, k - 1, primitive, rng));
    if (!w.is_zero()) return w;
  }
  // Fallback: d(x_{k} dx_1 ^ ... ^ dx_{k-1}) is a nonzero basis k-form.
  std::vector<int> J(k - 1);
  for (int i = 0; i < k - 1; ++i) J[i] = i;
  return exterior_derivative(
      KForm::monomial(Polynomial::variable(n, k - 1), MultiIndex(n, J)));
}

LipschitzMap random_affine_map(int n, double C, std::mt19937_64& rng) {
  if (!(C > 0)) throw ParameterError("random_affine_map: C must be positive");
  std::uniform_int_distribution<int> entry(-9, 9);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  Eigen::MatrixXd m(n, n);
  do {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a[i][j] = entry(rng);
        m(i, j) = a[i][j].get_d();
      }
    }
  } while (m.isZero());
  // Round the scale down to a multiple of 1e-6 so the norm stays at most C.
  Rational scale(static_cast<long>(std::floor(C / spectral_norm(m) * 1e6)), 1000000);
  scale.canonicalize();
  std::vector<Rational> b(n);
  std::uniform_int_distribution<int> shift(-4, 4);
  for (int i = 0; i < n; ++i) {
    for (auto& v : a[i]) v *= scale;
    b[i] = Rational(shift(rng), 8);
    b[i].canonicalize();
  }
  return LipschitzMap::affine(a, b, C);
}

}  // namespace formbound
