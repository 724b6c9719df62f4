#include <gtest/gtest.h>

#include <random>

#include "formbound/errors.hpp"
#include "formbound/form_io.hpp"
#include "formbound/random_forms.hpp"

using namespace formbound;

TEST(FormIo, ParsesPolynomialSyntax) {
  const Polynomial p = parse_polynomial("3/2 * x1^2 * x2 - x1 + 0.25", 2);
  EXPECT_EQ(p.coefficient({2, 1}), Rational(3, 2));
  EXPECT_EQ(p.coefficient({1, 0}), Rational(-1));
  EXPECT_EQ(p.coefficient({0, 0}), Rational(1, 4));
  EXPECT_EQ(format_polynomial(p), "3/2 * x1^2 * x2 - x1 + 1/4");
  EXPECT_EQ(format_polynomial(Polynomial(2)), "0");
  EXPECT_EQ(parse_polynomial("2 x1 x2", 2).coefficient({1, 1}), Rational(2));
}

TEST(FormIo, ParsesForms) {
  const KForm w = parse_form("# a 1-form\nn = 2\nk = 1\n1 : x2\n2 : -x1\n");
  EXPECT_EQ(w.dimension(), 2);
  EXPECT_EQ(w.degree(), 1);
  EXPECT_EQ(w.coefficient(MultiIndex(2, {0})), parse_polynomial("x2", 2));
  const KForm f = parse_form("n = 3\n: x1 * x3\n");
  EXPECT_EQ(f.degree(), 0);
  const KForm top = parse_form("1,2,3 : 1\n");
  EXPECT_EQ(top.dimension(), 3);
  EXPECT_EQ(top.degree(), 3);
}

TEST(FormIo, Errors) {
  EXPECT_THROW(parse_polynomial("x1 +", 2), ParseError);
  EXPECT_THROW(parse_polynomial("x3", 2), ParseError);
  EXPECT_THROW(parse_polynomial("1/0", 1), ParseError);
  EXPECT_THROW(parse_form("n = 2\n1 : x1\n1,2 : x2\n"), ParseError);
  EXPECT_THROW(parse_form("n = 2\n2,1 : x1\n"), ParseError);
}

TEST(FormIo, RoundTripsRandomForms) {
  std::mt19937_64 rng(11);
  RandomFormOptions opt;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k <= n; ++k) {
      const KForm w = random_form(n, k, opt, rng);
      EXPECT_EQ(parse_form(format_form(w)), w);
    }
  }
}
