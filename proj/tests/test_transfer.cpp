#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "formbound/constants.hpp"
#include "formbound/errors.hpp"
#include "formbound/form_io.hpp"
#include "formbound/homotopy.hpp"
#include "formbound/map_io.hpp"
#include "formbound/pullback.hpp"
#include "formbound/quadrature.hpp"
#include "formbound/random_forms.hpp"
#include "formbound/transfer.hpp"
#include "oracles.hpp"

using namespace formbound;

namespace {

KForm F(const char* text) { return parse_form(text); }

using RMatrix = std::vector<std::vector<Rational>>;

LipschitzMap random_polynomial_map(int n, std::mt19937_64& rng) {
  RandomFormOptions opt;
  opt.max_degree = 2;
  std::vector<Polynomial> comps;
  for (int i = 0; i < n; ++i) comps.push_back(random_polynomial(n, opt, rng));
  return LipschitzMap::polynomial(comps, 1.0);
}

// Affine map with spectral norm at most C.
LipschitzMap random_affine(int n, double C, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-9, 9);
  Eigen::MatrixXd A(n, n);
  RMatrix R(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) R[i][j] = entry(rng);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = R[i][j].get_d();
  }
  const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
  const Rational factor(static_cast<long>(std::floor(C / s * 1e6)), 1000000);
  for (auto& row : R) {
    for (auto& v : row) v *= factor;
  }
  return LipschitzMap::affine(R, std::vector<Rational>(n, Rational(1, 3)), C);
}

// (phi* w)_x(v...) = w_{phi(x)}(Dphi v, ...), with Dphi from exact partial derivatives.
Rational pullback_oracle(const LipschitzMap& phi, const KForm& w, const std::vector<Rational>& x,
                         const std::vector<std::vector<Rational>>& vectors) {
  const int n = phi.dimension();
  std::vector<Rational> y;
  for (const auto& c : phi.components()) y.push_back(c.evaluate(x));
  std::vector<std::vector<Rational>> pushed;
  for (const auto& v : vectors) {
    std::vector<Rational> u(n, Rational(0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) u[i] += phi.components()[i].derivative(j).evaluate(x) * v[j];
    }
    pushed.push_back(u);
  }
  return oracle::evaluate_form(w, y, pushed);
}

struct Pair {
  const char* name;
  LipschitzMap alpha;
  LipschitzMap beta;
  double inner_radius;
};

std::vector<Pair> transfer_pairs(int n) {
  std::vector<Pair> pairs;
  pairs.push_back({"identity", LipschitzMap::identity(n), LipschitzMap::identity(n), 1.0});
  pairs.push_back({"scaling", LipschitzMap::scaling(n, 2), LipschitzMap::scaling(n, Rational(1, 2)), 0.5});
  RMatrix shear(n, std::vector<Rational>(n, Rational(0))), unshear = shear;
  for (int i = 0; i < n; ++i) shear[i][i] = unshear[i][i] = 1;
  shear[0][1] = Rational(-1, 2);
  unshear[0][1] = Rational(1, 2);
  const std::vector<Rational> zero(n, Rational(0));
  pairs.push_back({"shear", LipschitzMap::affine(shear, zero), LipschitzMap::affine(unshear, zero), 1.0});
  return pairs;
}

}  // namespace

TEST(Pullback, Examples) {
  const KForm vol = F("n = 2\n1,2 : 1\n");
  EXPECT_EQ(pullback(LipschitzMap::identity(2), vol), vol);
  EXPECT_EQ(pullback(LipschitzMap::scaling(2, 2), vol), vol * Rational(4));
  // Rotation by the Pythagorean angle with cos = 3/5, sin = 4/5.
  const RMatrix rot{{Rational(3, 5), Rational(-4, 5)}, {Rational(4, 5), Rational(3, 5)}};
  EXPECT_EQ(pullback(LipschitzMap::affine(rot, {0, 0}), vol), vol);
  const LipschitzMap numeric = LipschitzMap::numeric(
      2, [](std::span<const double> x) { return Point(x.begin(), x.end()); },
      [](std::span<const double>) { return Eigen::MatrixXd::Identity(2, 2); }, 1.0);
  EXPECT_THROW(pullback(numeric, vol), UnsupportedMapError);
}

TEST(Pullback, MatchesChainRuleOracle) {
  std::mt19937_64 rng(307);
  RandomFormOptions opt;
  opt.max_degree = 2;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k <= n; ++k) {
      const LipschitzMap phi = random_polynomial_map(n, rng);
      const KForm w = random_form(n, k, opt, rng);
      const KForm pw = pullback(phi, w);
      const auto x = oracle::random_rational_point(n, rng);
      std::vector<std::vector<Rational>> vs;
      for (int i = 0; i < k; ++i) vs.push_back(oracle::random_rational_point(n, rng));
      EXPECT_EQ(oracle::evaluate_form(pw, x, vs), pullback_oracle(phi, w, x, vs)) << n << " " << k;
    }
  }
}

TEST(Pullback, FunctorialAndCommutesWithD) {
  std::mt19937_64 rng(311);
  RandomFormOptions opt;
  opt.max_degree = 2;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k <= n; ++k) {
      const LipschitzMap phi = random_polynomial_map(n, rng);
      const LipschitzMap psi = random_polynomial_map(n, rng);
      const KForm w = random_form(n, k, opt, rng);
      EXPECT_EQ(pullback(compose(phi, psi), w), pullback(psi, pullback(phi, w)));
      if (k < n) EXPECT_EQ(pullback(phi, exterior_derivative(w)), exterior_derivative(pullback(phi, w)));
    }
  }
}

TEST(Pullback, NumericAgreesWithExact) {
  std::mt19937_64 rng(313);
  RandomFormOptions opt;
  const LipschitzMap phi = random_polynomial_map(3, rng);
  const KForm w = random_form(3, 2, opt, rng);
  const NumericForm exact(pullback(phi, w));
  const NumericForm nw(w);
  const std::vector<double> x{0.2, -0.4, 0.3};
  std::vector<double> a(3), b(3);
  exact.evaluate(x, a);
  pullback_at(phi, nw, x, b);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-10 * (1 + std::abs(a[i])));
}

TEST(Pullback, PointwiseLipschitzBound) {
  std::mt19937_64 rng(317);
  RandomFormOptions opt;
  QuadratureConfig cfg;
  cfg.sample_count = 2000;
  for (int n = 1; n <= 4; ++n) {
    for (double C : {0.5, 1.0, 2.0}) {
      const LipschitzMap phi = random_affine(n, C, rng);
      ASSERT_LE(spectral_norm(phi.jacobian(std::vector<double>(n, 0.0))), C);
      for (int k = 0; k <= n; ++k) {
        const KForm w = random_form(n, k, opt, rng);
        const NumericForm nw(w);
        const double bound = pullback_pointwise_bound(n, k, C);
        const PointSet pts = sample_domain(Domain::ball(n, 1), cfg);
        std::vector<double> out(nw.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
          pullback_at(phi, nw, pts.point(i), out);
          double sq = 0;
          for (double v : out) sq += v * v;
          EXPECT_LE(std::sqrt(sq), bound * nw.norm_at(phi.apply(pts.point(i))) * (1 + 1e-12) + 1e-300);
        }
      }
    }
  }
}

TEST(Pullback, OperatorNormBound) {
  std::mt19937_64 rng(331);
  RandomFormOptions opt;
  QuadratureConfig cfg;
  const RMatrix A{{2, 1}, {0, Rational(1, 2)}};
  const RMatrix Ainv{{Rational(1, 2), -1}, {0, 2}};
  const LipschitzMap phi = LipschitzMap::affine(A, {0, 0});
  const LipschitzMap inv = LipschitzMap::affine(Ainv, {0, 0});
  const Domain source = Domain::ball(2, 1);
  const Domain target = Domain::image(source, phi.with_inverse(inv));
  for (int k = 0; k <= 2; ++k) {
    for (int trial = 0; trial < 5; ++trial) {
      const KForm w = random_form(2, k, opt, rng);
      if (w.is_zero()) continue;
      const double lhs = lp_norm(pullback(phi, w), source, 2, cfg).value;
      const double rhs = lp_norm(w, target, 2, cfg).value;
      const double bound =
          pullback_norm_bound(2, k, 2, phi.lipschitz_constant(), inv.lipschitz_constant());
      EXPECT_LE(lhs, bound * rhs);
    }
  }
}

TEST(Transfer, RejectsNonInversePairs) {
  EXPECT_THROW(make_transfer(LipschitzMap::scaling(2, 2), LipschitzMap::identity(2), 1.0), ParameterError);
  EXPECT_THROW(transfer_gamma(make_transfer(LipschitzMap::identity(2), LipschitzMap::identity(2), 1.0),
                              F("n = 2\n1 : x2\n")),
               NotClosedError);
}

TEST(Transfer, GammaIsAPrimitive) {
  std::mt19937_64 rng(337);
  RandomFormOptions opt;
  for (int n = 2; n <= 3; ++n) {
    for (const Pair& pair : transfer_pairs(n)) {
      const TransferOperator t = make_transfer(pair.alpha, pair.beta, pair.inner_radius);
      for (int k = 1; k <= n; ++k) {
        for (int trial = 0; trial < 5; ++trial) {
          const KForm w = random_closed_form(n, k, opt, rng);
          EXPECT_EQ(exterior_derivative(transfer_gamma(t, w)), w) << pair.name << " " << n << " " << k;
        }
      }
    }
  }
}

TEST(Transfer, BoundReducesToBiLipschitzFormula) {
  for (int n = 2; n <= 3; ++n) {
    const auto pairs = transfer_pairs(n);
    for (int k = 2; k <= n; ++k) {
      const double p = 4;
      const TransferOperator id = make_transfer(pairs[0].alpha, pairs[0].beta, 1.0);
      EXPECT_NEAR(transfer_bound(id, k, p), bound_bilipschitz(n, k, p, 1, bound_ball(n, k, p, 1)), 1e-9);
      // For the scaling pair beta has constant 1/2, alpha has 2.
      const TransferOperator sc = make_transfer(pairs[1].alpha, pairs[1].beta, 0.5);
      EXPECT_NEAR(transfer_bound(sc, k, p), bound_bilipschitz(n, k, p, 0.5, bound_ball(n, k, p, 0.5)),
                  1e-9 * transfer_bound(sc, k, p));
    }
  }
}

TEST(Transfer, EmpiricalRatiosStayBelowBound) {
  std::mt19937_64 rng(347);
  RandomFormOptions opt;
  QuadratureConfig cfg;
  for (const Pair& pair : transfer_pairs(2)) {
    const TransferOperator t = make_transfer(pair.alpha, pair.beta, pair.inner_radius);
    const Domain U = t.outer();
    const double bound = transfer_bound(t, 2, 2);
    for (int trial = 0; trial < 10; ++trial) {
      const KForm w = random_closed_form(2, 2, opt, rng);
      if (w.is_zero()) continue;
      const double ratio = lp_norm(transfer_gamma(t, w), U, 2, cfg).value / lp_norm(w, U, 2, cfg).value;
      EXPECT_LE(ratio, bound) << pair.name;
    }
  }
}

TEST(SimplexMap, VerticesLandOnTheSphere) {
  for (int n = 2; n <= 4; ++n) {
    const auto [b, R] = simplex_ball(n);
    const LipschitzMap phi = simplex_map(n);
    EXPECT_EQ(phi.lipschitz_constant(), static_cast<double>(n * n));
    for (int v = 0; v <= n; ++v) {
      Point x(n, 0.0);
      if (v < n) x[v] = 1;
      const Point y = phi.apply(x);
      double d = 0;
      for (int i = 0; i < n; ++i) d += (y[i] - b[i]) * (y[i] - b[i]);
      EXPECT_NEAR(std::sqrt(d), R, 1e-12);
    }
  }
}

TEST(SimplexMap, SampledConstantsAndInverse) {
  for (int n = 2; n <= 3; ++n) {
    const LipschitzMap phi = simplex_map(n);
    const Domain simplex = Domain::standard_simplex(n);
    EXPECT_LE(sampled_lipschitz_quotient(phi, simplex, 20000, 7), n * n);
    EXPECT_LE(sampled_jacobian_norm(phi, simplex, 20000, 7), n * n);
    EXPECT_LT(sampled_inverse_defect(phi, simplex, 5000, 7), 1e-12);
    ASSERT_NE(phi.inverse(), nullptr);
    const auto [b, R] = simplex_ball(n);
    const Domain ball = Domain::image(Domain::ball(n, R), LipschitzMap::numeric(
        n, [c = b](std::span<const double> x) {
          Point y(x.begin(), x.end());
          for (std::size_t i = 0; i < y.size(); ++i) y[i] += c[i];
          return y;
        },
        [n](std::span<const double>) { return Eigen::MatrixXd::Identity(n, n); }, 1.0));
    EXPECT_LE(sampled_jacobian_norm(*phi.inverse(), ball, 20000, 9), phi.inverse()->lipschitz_constant());
  }
}

TEST(MapFile, ParsesComponentsAndInverse) {
  const MapSpec s = parse_map(
      "# shear with inverse\n"
      "n = 2\nC = 1.281\n"
      "phi1 = x1 + 1/2 * x2\nphi2 = x2\n"
      "inverse_C = 1.281\ninv1 = x1 - 1/2 * x2\ninv2 = x2\n");
  EXPECT_EQ(s.map.dimension(), 2);
  EXPECT_DOUBLE_EQ(s.map.lipschitz_constant(), 1.281);
  EXPECT_EQ(s.map.components()[0], parse_polynomial("x1 + 1/2 x2", 2));
  ASSERT_TRUE(s.inverse.has_value());
  ASSERT_NE(s.map.inverse(), nullptr);
  const double y[] = {0.3, -0.7};
  const Point back = s.map.apply(s.inverse->apply(y));
  EXPECT_NEAR(back[0], 0.3, 1e-15);
  EXPECT_NEAR(back[1], -0.7, 1e-15);
  EXPECT_NO_THROW(make_transfer(s.map, *s.inverse, 1.0));
}

TEST(MapFile, Errors) {
  EXPECT_THROW(parse_map("n = 2\nC = 1\nphi1 = x1\n"), ParseError);
  EXPECT_THROW(parse_map("n = 2\nphi1 = x1\nphi2 = x2\n"), ParseError);
  EXPECT_THROW(parse_map("n = 2\nC = -1\nphi1 = x1\nphi2 = x2\n"), ParseError);
  EXPECT_THROW(parse_map("n = 2\nC = 1\nphi1 = x1\nphi2 = x2\nphi3 = x1\n"), ParseError);
  EXPECT_THROW(parse_map("n = 2\nC = 1\nphi1 = x1\nphi2 = x2\ncolor = 3\n"), ParseError);
  EXPECT_THROW(parse_map("n = 2\nC = 1\nphi1 = x1\nphi2 = x2\ninv1 = x1\ninv2 = x2\n"), ParseError);
  EXPECT_THROW(read_map_file("/nonexistent/formbound.map"), ParseError);
}
