#include <gtest/gtest.h>

#include <random>

#include "formbound/errors.hpp"
#include "formbound/form_io.hpp"
#include "formbound/kform.hpp"
#include "formbound/random_forms.hpp"
#include "oracles.hpp"

using namespace formbound;

namespace {

Polynomial P(const char* text, int n) { return parse_polynomial(text, n); }
KForm dx(int n, std::vector<int> idx) { return KForm::basis(n, idx); }

std::vector<Rational> unit(int n, int i) {
  std::vector<Rational> v(n, Rational(0));
  v[i] = 1;
  return v;
}

}  // namespace

TEST(KForm, WedgeExamples) {
  EXPECT_EQ(wedge(dx(2, {0}), dx(2, {1})), dx(2, {0, 1}));
  EXPECT_TRUE(wedge(dx(2, {0}), dx(2, {0})).is_zero());
  const KForm a = P("x1", 2) * dx(2, {0});
  EXPECT_EQ(wedge(a, dx(2, {1})), P("x1", 2) * dx(2, {0, 1}));
  EXPECT_EQ(wedge(a, dx(2, {1})), oracle::brute_wedge(a, dx(2, {1})));
  EXPECT_THROW(wedge(dx(2, {0}), dx(3, {0})), DimensionError);
  EXPECT_THROW(wedge(dx(2, {0, 1}), dx(2, {0})), DegreeError);
}

TEST(KForm, WedgeMatchesBruteForceAndGradedCommutativity) {
  std::mt19937_64 rng(17);
  RandomFormOptions opt;
  opt.max_degree = 2;
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (int l = 0; k + l <= n; ++l) {
        const KForm a = random_form(n, k, opt, rng);
        const KForm b = random_form(n, l, opt, rng);
        const KForm ab = wedge(a, b);
        EXPECT_EQ(ab, oracle::brute_wedge(a, b));
        EXPECT_EQ(ab, wedge(b, a) * Rational((k * l) % 2 == 0 ? 1 : -1));
      }
    }
  }
}

TEST(KForm, ExteriorDerivativeExamples) {
  EXPECT_EQ(exterior_derivative(KForm::function(P("x1", 2))), dx(2, {0}));
  EXPECT_EQ(exterior_derivative(P("x1", 2) * dx(2, {1})), dx(2, {0, 1}));
  const KForm w = P("x1^2", 2) * dx(2, {1}) - P("x1*x2", 2) * dx(2, {0});
  EXPECT_EQ(exterior_derivative(w), P("3*x1", 2) * dx(2, {0, 1}));
  EXPECT_THROW(exterior_derivative(dx(2, {0, 1})), DegreeError);
}

TEST(KForm, DSquaredIsZero) {
  std::mt19937_64 rng(23);
  RandomFormOptions opt;
  opt.max_degree = 5;
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k <= n - 2; ++k) {
      for (int trial = 0; trial < 3; ++trial) {
        const KForm w = random_form(n, k, opt, rng);
        EXPECT_TRUE(exterior_derivative(exterior_derivative(w)).is_zero()) << n << " " << k;
      }
    }
  }
}

TEST(KForm, LeibnizRule) {
  std::mt19937_64 rng(29);
  RandomFormOptions opt;
  for (int n = 2; n <= 4; ++n) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; k + l < n; ++l) {
        const KForm a = random_form(n, k, opt, rng);
        const KForm b = random_form(n, l, opt, rng);
        const KForm lhs = exterior_derivative(wedge(a, b));
        KForm rhs = wedge(exterior_derivative(a), b);
        const KForm tail = wedge(a, exterior_derivative(b));
        rhs = k % 2 == 0 ? rhs + tail : rhs - tail;
        EXPECT_EQ(lhs, rhs);
      }
    }
  }
}

TEST(KForm, InteriorRadialExamples) {
  EXPECT_EQ(interior_radial(dx(2, {0})), KForm::function(P("x1", 2)));
  EXPECT_EQ(interior_radial(dx(2, {0, 1})), P("x1", 2) * dx(2, {1}) - P("x2", 2) * dx(2, {0}));
  EXPECT_TRUE(interior_radial(interior_radial(dx(2, {0, 1}))).is_zero());
  EXPECT_THROW(interior_radial(KForm::function(P("x1", 2))), DegreeError);
}

TEST(KForm, InteriorRadialAgreesWithEvaluation) {
  // (i_X w)_x(v_2..v_k) = w_x(x, v_2, ..., v_k), checked through the determinant oracle.
  std::mt19937_64 rng(31);
  RandomFormOptions opt;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 1; k <= n; ++k) {
      const KForm w = random_form(n, k, opt, rng);
      const KForm iw = interior_radial(w);
      for (int trial = 0; trial < 3; ++trial) {
        const auto x = oracle::random_rational_point(n, rng);
        std::vector<std::vector<Rational>> vs{x};
        for (int i = 1; i < k; ++i) vs.push_back(oracle::random_rational_point(n, rng));
        const std::vector<std::vector<Rational>> rest(vs.begin() + 1, vs.end());
        EXPECT_EQ(oracle::evaluate_form(iw, x, rest), oracle::evaluate_form(w, x, vs));
      }
      EXPECT_TRUE(k < 2 || interior_radial(iw).is_zero());
    }
  }
}

TEST(KForm, CartanEulerIdentity) {
  std::mt19937_64 rng(37);
  RandomFormOptions opt;
  opt.max_degree = 4;
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k < n; ++k) {
      const KForm w = random_form(n, k, opt, rng);
      for (int m = 0; m <= 4; ++m) {
        const KForm h = w.homogeneous_part(m);
        const KForm lhs = exterior_derivative(interior_radial(h)) + interior_radial(exterior_derivative(h));
        EXPECT_EQ(lhs, h * Rational(m + k));
      }
    }
  }
}

TEST(KForm, PointwiseNorm) {
  EXPECT_EQ(pointwise_norm_sq(dx(2, {0})), P("1", 2));
  EXPECT_EQ(pointwise_norm_sq(P("x1", 2) * dx(2, {1}) - P("x2", 2) * dx(2, {0})), P("x1^2 + x2^2", 2));
  EXPECT_TRUE(pointwise_norm_sq(KForm(2, 1)).is_zero());
  std::mt19937_64 rng(41);
  RandomFormOptions opt;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k <= n; ++k) {
      const KForm w = random_form(n, k, opt, rng);
      const Polynomial q = pointwise_norm_sq(w);
      const auto x = oracle::random_rational_point(n, rng);
      Rational expected = 0;
      for (const auto& [J, f] : w.coefficients()) {
        const Rational v = f.evaluate(x);
        expected += v * v;
      }
      EXPECT_EQ(q.evaluate(x), expected);
    }
  }
}

TEST(KForm, EvaluateExamplesAndOracle) {
  const std::vector<Rational> origin(2, Rational(0));
  const std::vector<std::vector<Rational>> e1{unit(2, 0)};
  EXPECT_EQ(evaluate(dx(2, {0}), origin, e1), Rational(1));
  const std::vector<std::vector<Rational>> e12{unit(2, 0), unit(2, 1)};
  const std::vector<std::vector<Rational>> e21{unit(2, 1), unit(2, 0)};
  EXPECT_EQ(evaluate(dx(2, {0, 1}), origin, e12), Rational(1));
  EXPECT_EQ(evaluate(dx(2, {0, 1}), origin, e21), Rational(-1));
  const std::vector<Rational> x{2, 0};
  const std::vector<std::vector<Rational>> e2{unit(2, 1)};
  EXPECT_EQ(evaluate(P("x1", 2) * dx(2, {1}), x, e2), Rational(2));
  EXPECT_THROW(evaluate(dx(2, {0}), origin, e12), DimensionError);

  std::mt19937_64 rng(43);
  RandomFormOptions opt;
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k <= n; ++k) {
      const KForm w = random_form(n, k, opt, rng);
      const auto p = oracle::random_rational_point(n, rng);
      std::vector<std::vector<Rational>> vs;
      for (int i = 0; i < k; ++i) vs.push_back(oracle::random_rational_point(n, rng));
      EXPECT_EQ(evaluate(w, p, vs), oracle::evaluate_form(w, p, vs));
    }
  }
}

TEST(KForm, NumericFormMatchesExact) {
  std::mt19937_64 rng(47);
  RandomFormOptions opt;
  const KForm w = random_form(3, 2, opt, rng);
  const NumericForm nw(w);
  const std::vector<double> x{0.25, -0.5, 0.75};
  std::vector<double> out(nw.size());
  nw.evaluate(x, out);
  double sq = 0;
  for (std::size_t i = 0; i < nw.size(); ++i) {
    const double expected = w.coefficient(nw.basis()[i]).evaluate(std::span<const double>(x));
    EXPECT_NEAR(out[i], expected, 1e-12);
    sq += expected * expected;
  }
  EXPECT_NEAR(nw.norm_at(x), std::sqrt(sq), 1e-12);
}
