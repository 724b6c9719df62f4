#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "formbound/errors.hpp"
#include "formbound/form_io.hpp"
#include "formbound/homotopy.hpp"
#include "formbound/pharmonic.hpp"
#include "formbound/random_forms.hpp"

using namespace formbound;

namespace {

constexpr double pi = std::numbers::pi;
const Domain disk = Domain::ball(2, 1);

KForm F(const char* text) { return parse_form(text); }

// Exact L^2 inner product of two k-forms through the moment formulas.
double inner(const KForm& a, const KForm& b, const Domain& dom) {
  Polynomial s(a.dimension());
  for (const auto& [J, f] : a.coefficients()) s += f * b.coefficient(J);
  return *integrate_exact(s, dom);
}

std::vector<double> random_coeffs(std::size_t m, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> c(m);
  for (auto& v : c) v = u(rng);
  return c;
}

}  // namespace

TEST(Energy, Examples) {
  QuadratureConfig cfg;
  EXPECT_EQ(energy(KForm(2, 1), disk, 2, cfg), 0.0);
  EXPECT_NEAR(energy(F("n = 2\n1 : 1\n"), disk, 2, cfg), pi, 1e-12);
  const KForm w = F("n = 2\n1 : x2\n2 : 1 - x1\n");
  for (double p : {2.0, 3.0, 4.0}) {
    EXPECT_NEAR(energy(w * Rational(2), disk, p, cfg), std::pow(2, p) * energy(w, disk, p, cfg),
                1e-10 * std::pow(2, p) * energy(w, disk, p, cfg));
  }
  EXPECT_THROW(energy(w, disk, 1, cfg), ParameterError);
}

TEST(SolutionSpace, GaugeIsExactAndIndependent) {
  QuadratureConfig cfg;
  const KForm base = homotopy_S(F("n = 2\n1,2 : x1\n"));
  const SolutionSpace space(base, 3, disk, 2, cfg);
  ASSERT_GT(space.size(), 0u);
  EXPECT_EQ(space.gram_rank(), space.size());
  for (std::size_t b = 0; b < space.size(); ++b) {
    EXPECT_TRUE(exterior_derivative(space.gauge()[b]).is_zero());
    EXPECT_EQ(space.gauge()[b], exterior_derivative(space.potentials()[b]));
  }
}

TEST(SolutionSpace, QuadraticGradientOracle) {
  QuadratureConfig cfg;
  std::mt19937_64 rng(401);
  const KForm base = homotopy_S(F("n = 2\n1,2 : 1 + x1 * x2\n"));
  const SolutionSpace space(base, 3, disk, 2, cfg);
  const std::size_t m = space.size();
  Eigen::MatrixXd G(m, m);
  Eigen::VectorXd rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = inner(base, space.gauge()[i], disk);
    for (std::size_t j = 0; j < m; ++j) G(i, j) = inner(space.gauge()[i], space.gauge()[j], disk);
  }
  EXPECT_LT((G - space.gram()).norm(), 1e-12 * G.norm());
  const auto c = random_coeffs(m, rng, 1.0);
  const Eigen::VectorXd cv = Eigen::Map<const Eigen::VectorXd>(c.data(), m);
  const Eigen::VectorXd expected = 2 * (G * cv + rhs);
  const auto grad = energy_gradient(c, space);
  for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(grad[i], expected[i], 1e-10 * (1 + expected.norm()));
}

TEST(SolutionSpace, OrthogonalDirectionsGiveZeroGradient) {
  // eta = (x1 dx2 - x2 dx1)/2 is coclosed, so <eta, d phi> integrates to zero over the disk.
  QuadratureConfig cfg;
  const SolutionSpace space(F("n = 2\n1 : -1/2 * x2\n2 : 1/2 * x1\n"), 3, disk, 2, cfg);
  for (double g : energy_gradient(std::vector<double>(space.size(), 0.0), space)) EXPECT_NEAR(g, 0.0, 1e-14);
}

TEST(SolutionSpace, GradientMatchesFiniteDifferences) {
  QuadratureConfig cfg;
  std::mt19937_64 rng(409);
  RandomFormOptions opt;
  opt.max_degree = 2;
  for (int n = 2; n <= 3; ++n) {
    for (double p : {2.0, 3.0, 4.0}) {
      const KForm omega = random_closed_form(n, 2, opt, rng);
      const SolutionSpace space(homotopy_S(omega), 2, Domain::ball(n, 1), p, cfg);
      const auto c = random_coeffs(space.size(), rng, 0.5);
      const auto grad = space.gradient(c);
      double gnorm = 0;
      for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
      const double h = 1e-5;
      for (std::size_t b = 0; b < space.size(); ++b) {
        auto cp = c, cm = c;
        cp[b] += h;
        cm[b] -= h;
        const double fd = (space.energy(cp) - space.energy(cm)) / (2 * h);
        EXPECT_LE(std::abs(grad[b] - fd), 1e-4 * std::max(std::abs(grad[b]), gnorm)) << n << " " << p;
      }
    }
  }
}

TEST(PHarmonic, CoclosedPrimitiveNeedsNoCorrection) {
  QuadratureConfig cfg;
  const KForm omega = F("n = 2\n1,2 : 1\n");
  for (bool iterative : {false, true}) {
    PHarmonicOptions opt;
    opt.force_iterative = iterative;
    const PHarmonicResult r = p_harmonic_representative(omega, disk, 2, 3, cfg, opt);
    double largest = 0;
    for (double c : r.coefficients) largest = std::max(largest, std::abs(c));
    EXPECT_LE(largest, 1e-5);
    EXPECT_NEAR(r.energy, pi / 8, 1e-12);
    EXPECT_EQ(exterior_derivative(r.eta), omega);
  }
  const PHarmonicResult r = p_harmonic_representative(omega, disk, 2, 3, cfg);
  const double correction_sq = r.energy - pi / 8;  // = ||sum c_b d phi_b||_2^2 by orthogonality
  EXPECT_LE(std::sqrt(std::max(correction_sq, 0.0)), 1e-5);
}

TEST(PHarmonic, IterativeMatchesDirectForPEqualsTwo) {
  QuadratureConfig cfg;
  std::mt19937_64 rng(419);
  RandomFormOptions opt;
  opt.max_degree = 2;
  for (int n = 2; n <= 3; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const KForm omega = random_closed_form(n, 2, opt, rng);
      if (omega.is_zero()) continue;
      const Domain ball = Domain::ball(n, 1);
      PHarmonicOptions iterative;
      iterative.force_iterative = true;
      iterative.tol = 1e-10;
      const PHarmonicResult a = p_harmonic_representative(omega, ball, 2, 3, cfg);
      const PHarmonicResult b = p_harmonic_representative(omega, ball, 2, 3, cfg, iterative);
      EXPECT_LE(std::abs(b.energy - a.energy) / a.energy, 1e-8);
      EXPECT_LE(b.energy, a.energy * (1 + 1e-12));
    }
  }
}

TEST(PHarmonic, NonQuadraticConvergesWithMonotoneEnergy) {
  QuadratureConfig cfg;
  std::mt19937_64 rng(421);
  RandomFormOptions opt;
  opt.max_degree = 2;
  for (double p : {1.5, 3.0, 4.0}) {
    const KForm omega = random_closed_form(2, 2, opt, rng) + F("n = 2\n1,2 : x1^2\n");
    const PHarmonicResult r = p_harmonic_representative(omega, disk, p, 3, cfg);
    EXPECT_EQ(exterior_derivative(r.eta), omega);
    EXPECT_LE(r.el_residual, 1e-6);
    for (std::size_t i = 1; i < r.energy_history.size(); ++i) {
      EXPECT_LE(r.energy_history[i], r.energy_history[i - 1]);
    }
    EXPECT_LE(r.energy, energy(homotopy_S(omega), disk, p, cfg) * (1 + 1e-12) + 1e-12);
  }
}

TEST(PHarmonic, Homogeneity) {
  QuadratureConfig cfg;
  const KForm omega = F("n = 2\n1,2 : 1 + x1^2 - x2\n");
  PHarmonicOptions opt;
  opt.tol = 1e-10;
  const PHarmonicResult a = p_harmonic_representative(omega, disk, 3, 3, cfg, opt);
  const PHarmonicResult b = p_harmonic_representative(omega * Rational(3), disk, 3, 3, cfg, opt);
  ASSERT_EQ(a.coefficients.size(), b.coefficients.size());
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
    EXPECT_NEAR(b.coefficients[i], 3 * a.coefficients[i], 1e-5);
  }
  EXPECT_NEAR(b.energy, 27 * a.energy, 1e-6 * b.energy);
}

TEST(PHarmonic, ReportsNonConvergence) {
  QuadratureConfig cfg;
  const KForm omega = F("n = 2\n1,2 : 1 + x1^2 + x1 * x2^3\n");
  PHarmonicOptions opt;
  opt.max_iterations = 1;
  opt.tol = 1e-14;
  try {
    p_harmonic_representative(omega, disk, 4, 4, cfg, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.best_coefficients().empty());
    EXPECT_LE(e.best_energy(), energy(homotopy_S(omega), disk, 4, cfg));
  }
  EXPECT_THROW(p_harmonic_representative(F("n = 2\n1 : x2\n"), disk, 2, 2, cfg), NotClosedError);
}

TEST(QuotientNorm, Examples) {
  QuadratureConfig cfg;
  EXPECT_NEAR(quotient_norm(F("n = 2\n1 : -1/2 * x2\n2 : 1/2 * x1\n"), disk, 2, 3, cfg), std::sqrt(pi / 8), 1e-10);
  EXPECT_NEAR(quotient_norm(F("n = 2\n1 : 2 * x1 * x2\n2 : x1^2\n"), disk, 2, 3, cfg), 0.0, 1e-6);
  const KForm z = F("n = 2\n1 : x2^3 + x1\n2 : x1 * x2 - x1^2\n");
  double previous = std::numeric_limits<double>::infinity();
  for (int degree = 1; degree <= 4; ++degree) {
    const double q = quotient_norm(z, disk, 3, degree, cfg);
    EXPECT_LE(q, previous * (1 + 1e-9));
    previous = q;
  }
}

TEST(FinalBound, IdentityExampleAndRandomDraws) {
  QuadratureConfig cfg;
  const TransferOperator t = make_transfer(LipschitzMap::identity(2), LipschitzMap::identity(2), 1.0);
  const FinalBoundReport r = check_final_bound(F("n = 2\n1,2 : 1\n"), t, 2, 3, cfg);
  EXPECT_NEAR(r.ratio, 1 / std::sqrt(8.0), 1e-10);
  EXPECT_NEAR(r.bound, 8.0, 1e-12);
  EXPECT_TRUE(r.holds);
  const FinalBoundReport zero = check_final_bound(KForm(2, 2), t, 2, 3, cfg);
  EXPECT_EQ(zero.ratio, 0.0);
  EXPECT_THROW(check_final_bound(F("n = 2\n1 : 1\n"), t, 2, 3, cfg), AdmissibilityError);

  std::mt19937_64 rng(431);
  RandomFormOptions opt;
  opt.max_degree = 2;
  int draws = 0;
  while (draws < 100) {
    const KForm w = random_closed_form(2, 2, opt, rng);
    if (w.is_zero()) continue;
    const FinalBoundReport d = check_final_bound(w, t, 2, 2, cfg);
    EXPECT_TRUE(d.holds) << d.ratio << " " << d.bound;
    ++draws;
  }
}
