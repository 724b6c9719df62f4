#include <gtest/gtest.h>

#include <random>

#include "formbound/errors.hpp"
#include "formbound/form_io.hpp"
#include "formbound/polynomial.hpp"
#include "formbound/random_forms.hpp"
#include "oracles.hpp"

using namespace formbound;

namespace {
Polynomial P(const char* text, int n) { return parse_polynomial(text, n); }
}  // namespace

TEST(Polynomial, CanonicalArithmetic) {
  const Polynomial a = P("x1 + x2", 2);
  const Polynomial b = P("x1 - x2", 2);
  EXPECT_EQ(a * b, P("x1^2 - x2^2", 2));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ((a - a).degree(), -1);
  EXPECT_EQ(a.pow(3).coefficient({2, 1}), Rational(3));
  EXPECT_EQ((a * Rational(1, 3)).coefficient({1, 0}), Rational(1, 3));
}

TEST(Polynomial, DerivativeAndHomogeneousParts) {
  const Polynomial f = P("3*x1^2*x2 + 5*x2 - 7", 2);
  EXPECT_EQ(f.derivative(0), P("6*x1*x2", 2));
  EXPECT_EQ(f.derivative(1), P("3*x1^2 + 5", 2));
  EXPECT_EQ(f.homogeneous_part(3), P("3*x1^2*x2", 2));
  EXPECT_EQ(f.homogeneous_part(0), P("-7", 2));
  EXPECT_EQ(f.scale_argument(2), P("24*x1^2*x2 + 10*x2 - 7", 2));
}

TEST(Polynomial, ComposeMatchesPointEvaluation) {
  std::mt19937_64 rng(3);
  RandomFormOptions opt;
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial f = random_polynomial(3, opt, rng);
    std::vector<Polynomial> g{random_polynomial(2, opt, rng), random_polynomial(2, opt, rng),
                              random_polynomial(2, opt, rng)};
    const Polynomial h = f.compose(g);
    const auto x = oracle::random_rational_point(2, rng);
    std::vector<Rational> gx;
    for (const auto& c : g) gx.push_back(c.evaluate(x));
    EXPECT_EQ(h.evaluate(x), f.evaluate(gx));
  }
}

TEST(Polynomial, NumericImageAgrees) {
  std::mt19937_64 rng(5);
  RandomFormOptions opt;
  opt.max_degree = 4;
  for (int trial = 0; trial < 20; ++trial) {
    const Polynomial f = random_polynomial(3, opt, rng);
    const NumericPolynomial nf(f);
    const std::vector<double> x{0.3, -0.7, 1.1};
    std::vector<double> grad(3);
    EXPECT_NEAR(nf(x), f.evaluate(std::span<const double>(x)), 1e-12);
    EXPECT_NEAR(nf.value_and_gradient(x, grad), nf(x), 1e-12);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(grad[i], f.derivative(i).evaluate(std::span<const double>(x)), 1e-11);
    }
  }
}

TEST(Polynomial, DimensionMismatchThrows) {
  EXPECT_THROW(P("x1", 1) + P("x1", 2), DimensionError);
}

TEST(Polynomial, CanonicalizesUnreducedRationals) {
  const Polynomial a = Polynomial::monomial(2, {1, 0}, Rational(2, 4));
  const Polynomial b = Polynomial::monomial(2, {1, 0}, Rational(1, 2));
  EXPECT_EQ(a, b);
  EXPECT_EQ(b * Rational(6, 4), Polynomial::monomial(2, {1, 0}, Rational(3, 4)));
}
