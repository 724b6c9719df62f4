#include "formbound/pharmonic.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "formbound/constants.hpp"
#include "formbound/errors.hpp"
#include "formbound/homotopy.hpp"
#include "formbound/random_forms.hpp"

namespace formbound {

namespace {

void require_convex_p(double p) {
  if (!(p > 1)) throw ParameterError("energy: p must exceed 1");
}

using SparseKey = std::pair<MultiIndex, Exponent>;

// Incremental exact row reduction: accepts a vector iff it is independent of those kept.
class ExactEchelon {
 public:
  bool insert(std::map<SparseKey, Rational> v) {
    for (const auto& [pivot, row] : rows_) {
      auto it = v.find(pivot);
      if (it == v.end()) continue;
      const Rational f = it->second;
      for (const auto& [key, value] : row) {
        Rational& slot = v[key];
        slot -= f * value;
        if (slot == 0) v.erase(key);
      }
    }
    if (v.empty()) return false;
    const SparseKey pivot = v.begin()->first;
    const Rational lead = v.begin()->second;
    for (auto& [key, value] : v) value /= lead;
    // Keep earlier rows reduced against the new pivot so pivots stay unique.
    for (auto& [p, row] : rows_) {
      auto it = row.find(pivot);
      if (it == row.end()) continue;
      const Rational f = it->second;
      for (const auto& [key, value] : v) {
        Rational& slot = row[key];
        slot -= f * value;
        if (slot == 0) row.erase(key);
      }
    }
    rows_.emplace_back(pivot, std::move(v));
    return true;
  }

 private:
  std::vector<std::pair<SparseKey, std::map<SparseKey, Rational>>> rows_;
};

std::map<SparseKey, Rational> flatten(const KForm& w) {
  std::map<SparseKey, Rational> out;
  for (const auto& [J, f] : w.coefficients()) {
    for (const auto& [e, c] : f.terms()) out.emplace(SparseKey{J, e}, c);
  }
  return out;
}

int rule_degree(int eta_degree, double p) {
  const int d = std::max(eta_degree, 0);
  if (is_even_integer(p)) return static_cast<int>(p) * d;
  return std::min(60, static_cast<int>(std::ceil(p)) * d + 6);
}

}  // namespace

double energy(const KForm& w, const Domain& dom, double p, const QuadratureConfig& cfg) {
  require_convex_p(p);
  return std::pow(lp_norm(w, dom, p, cfg).value, p);
}

SolutionSpace::SolutionSpace(KForm base, int max_degree, const Domain& dom, double p,
                             const QuadratureConfig& cfg)
    : base_(std::move(base)), p_(p) {
  require_convex_p(p);
  const int n = base_.dimension();
  const int j = base_.degree();
  if (dom.dimension() != n) throw DimensionError("SolutionSpace: domain dimension");
  if (max_degree < 0) throw ParameterError("SolutionSpace: max_degree must be nonnegative");

  if (j >= 1) {
    ExactEchelon echelon;
    for (const auto& I : all_multi_indices(n, j - 1)) {
      for (const auto& alpha : exponents_up_to(n, max_degree)) {
        const KForm phi = KForm::monomial(Polynomial::monomial(n, alpha), I);
        const KForm dphi = exterior_derivative(phi);
        if (dphi.is_zero()) continue;
        if (echelon.insert(flatten(dphi))) {
          potentials_.push_back(phi);
          gauge_.push_back(dphi);
        }
      }
    }
  }

  int eta_degree = base_.polynomial_degree();
  for (const auto& g : gauge_) eta_degree = std::max(eta_degree, g.polynomial_degree());
  rule_ = cubature_rule(dom, rule_degree(eta_degree, p), cfg);

  const NumericForm base_numeric(base_);
  components_ = base_numeric.size();
  const auto rows = static_cast<Eigen::Index>(rule_.size() * components_);
  base_values_.resize(rows);
  gauge_values_.resize(rows, static_cast<Eigen::Index>(gauge_.size()));
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    base_numeric.evaluate(rule_.point(i),
                          std::span<double>(base_values_.data() + i * components_, components_));
  }
  std::vector<double> values(components_);
  for (std::size_t b = 0; b < gauge_.size(); ++b) {
    const NumericForm g(gauge_[b]);
    for (std::size_t i = 0; i < rule_.size(); ++i) {
      g.evaluate(rule_.point(i), values);
      for (std::size_t c = 0; c < components_; ++c) {
        gauge_values_(static_cast<Eigen::Index>(i * components_ + c), static_cast<Eigen::Index>(b)) =
            values[c];
      }
    }
  }
  Eigen::VectorXd w(rows);
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    for (std::size_t c = 0; c < components_; ++c) w[static_cast<Eigen::Index>(i * components_ + c)] = rule_.weights[i];
  }
  gram_ = gauge_values_.transpose() * w.asDiagonal() * gauge_values_;
  if (!gauge_.empty()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_);
    const double top = eig.eigenvalues().maxCoeff();
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      if (eig.eigenvalues()[i] > 1e-12 * top) ++gram_rank_;
    }
  }
}

KForm SolutionSpace::member(const std::vector<double>& coeffs) const {
  if (coeffs.size() != gauge_.size()) throw DimensionError("SolutionSpace: coefficient count");
  KForm out = base_;
  for (std::size_t b = 0; b < gauge_.size(); ++b) {
    if (coeffs[b] != 0) out += gauge_[b] * Rational(coeffs[b]);
  }
  return out;
}

double SolutionSpace::energy_and_gradient(const std::vector<double>& coeffs,
                                          std::vector<double>& grad) const {
  if (coeffs.size() != gauge_.size()) throw DimensionError("SolutionSpace: coefficient count");
  const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
  const Eigen::VectorXd eta = gauge_.empty() ? base_values_ : Eigen::VectorXd(base_values_ + gauge_values_ * c);
  Eigen::VectorXd weighted(eta.size());
  double total = 0;
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    const auto seg = eta.segment(static_cast<Eigen::Index>(i * components_), static_cast<Eigen::Index>(components_));
    const double norm_sq = seg.squaredNorm();
    const double norm_p = norm_sq > 0 ? std::pow(norm_sq, p_ / 2) : 0.0;
    total += rule_.weights[i] * norm_p;
    // p |eta|^(p-2) eta, times the weight.
    const double factor = norm_sq > 0 ? rule_.weights[i] * p_ * norm_p / norm_sq : 0.0;
    weighted.segment(static_cast<Eigen::Index>(i * components_), static_cast<Eigen::Index>(components_)) =
        factor * seg;
  }
  grad.resize(gauge_.size());
  if (!gauge_.empty()) Eigen::Map<Eigen::VectorXd>(grad.data(), static_cast<Eigen::Index>(grad.size())) = gauge_values_.transpose() * weighted;
  return total;
}

double SolutionSpace::energy(const std::vector<double>& coeffs) const {
  std::vector<double> grad;
  return energy_and_gradient(coeffs, grad);
}

std::vector<double> SolutionSpace::gradient(const std::vector<double>& coeffs) const {
  std::vector<double> grad;
  energy_and_gradient(coeffs, grad);
  return grad;
}

std::vector<double> SolutionSpace::solve_quadratic() const {
  if (gauge_.empty()) return {};
  Eigen::VectorXd w(base_values_.size());
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    for (std::size_t c = 0; c < components_; ++c) w[static_cast<Eigen::Index>(i * components_ + c)] = rule_.weights[i];
  }
  const Eigen::VectorXd rhs = -(gauge_values_.transpose() * w.asDiagonal() * base_values_);
  const Eigen::VectorXd c = gram_.ldlt().solve(rhs);
  return {c.data(), c.data() + c.size()};
}

std::vector<double> energy_gradient(const std::vector<double>& coeffs, const SolutionSpace& space) {
  return space.gradient(coeffs);
}

PHarmonicResult minimize_energy(const SolutionSpace& space, const PHarmonicOptions& options) {
  const std::size_t m = space.size();
  PHarmonicResult result;
  std::vector<double> c(m, 0.0), grad;
  double e = space.energy_and_gradient(c, grad);
  result.energy_history.push_back(e);

  auto finish = [&](const std::vector<double>& coeffs, double energy_value,
                    const std::vector<double>& g, int iterations) {
    result.coefficients = coeffs;
    result.energy = energy_value;
    double worst = 0;
    for (double v : g) worst = std::max(worst, std::abs(v));
    result.el_residual = worst / space.p() / (1 + energy_value);
    result.iterations = iterations;
    result.eta = space.member(coeffs);
    return result;
  };
  auto converged = [&](const std::vector<double>& g, double energy_value) {
    double worst = 0;
    for (double v : g) worst = std::max(worst, std::abs(v));
    return worst <= options.tol * (1 + energy_value);
  };

  if (m == 0) return finish(c, e, grad, 0);
  if (space.p() == 2 && !options.force_iterative) {
    c = space.solve_quadratic();
    e = space.energy_and_gradient(c, grad);
    result.energy_history.push_back(e);
    return finish(c, e, grad, 1);
  }

  // Orthonormal coordinates y = L^T c, Gram = L L^T.
  const Eigen::LLT<Eigen::MatrixXd> chol(space.gram());
  const Eigen::MatrixXd L = chol.matrixL();
  auto to_c = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd v = L.transpose().triangularView<Eigen::Upper>().solve(y);
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  auto grad_y = [&](const std::vector<double>& g) {
    const Eigen::Map<const Eigen::VectorXd> gc(g.data(), static_cast<Eigen::Index>(g.size()));
    return Eigen::VectorXd(L.triangularView<Eigen::Lower>().solve(gc));
  };

  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  Eigen::VectorXd gy = grad_y(grad);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history;
  for (int it = 1; it <= options.max_iterations; ++it) {
    if (converged(grad, e)) return finish(c, e, grad, it - 1);
    // Two-loop recursion.
    Eigen::VectorXd q = gy;
    std::vector<double> alphas(history.size());
    for (std::size_t h = history.size(); h-- > 0;) {
      const auto& [s, t] = history[h];
      alphas[h] = s.dot(q) / t.dot(s);
      q -= alphas[h] * t;
    }
    if (!history.empty()) {
      const auto& [s, t] = history.back();
      q *= s.dot(t) / t.dot(t);
    }
    for (std::size_t h = 0; h < history.size(); ++h) {
      const auto& [s, t] = history[h];
      const double beta = t.dot(q) / t.dot(s);
      q += (alphas[h] - beta) * s;
    }
    Eigen::VectorXd dir = -q;
    double slope = dir.dot(gy);
    if (!(slope < 0)) {
      dir = -gy;
      slope = dir.dot(gy);
      history.clear();
    }
    double step = 1.0;
    std::vector<double> c_new, g_new;
    double e_new = e;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      c_new = to_c(y + step * dir);
      e_new = space.energy_and_gradient(c_new, g_new);
      if (e_new <= e + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease at machine resolution: the iterate is as good as the energy resolves.
      return finish(c, e, grad, it);
    }
    const Eigen::VectorXd y_new = y + step * dir;
    const Eigen::VectorXd gy_new = grad_y(g_new);
    const Eigen::VectorXd s = y_new - y, t = gy_new - gy;
    if (s.dot(t) > 1e-300) {
      history.emplace_back(s, t);
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    y = y_new;
    gy = gy_new;
    c = std::move(c_new);
    grad = std::move(g_new);
    e = e_new;
    result.energy_history.push_back(e);
  }
  if (converged(grad, e)) return finish(c, e, grad, options.max_iterations);
  throw ConvergenceError("minimize_energy: iteration budget exhausted", c, e);
}

PHarmonicResult p_harmonic_representative(const KForm& omega, const Domain& dom, double p,
                                          int max_degree, const QuadratureConfig& cfg,
                                          const PHarmonicOptions& options) {
  require_convex_p(p);
  if (omega.degree() < omega.dimension() && !exterior_derivative(omega).is_zero()) {
    throw NotClosedError("p_harmonic_representative: omega is not closed");
  }
  const SolutionSpace space(homotopy_S(omega), max_degree, dom, p, cfg);
  return minimize_energy(space, options);
}

double quotient_norm(const KForm& zeta, const Domain& dom, double p, int max_degree,
                     const QuadratureConfig& cfg, const PHarmonicOptions& options) {
  const SolutionSpace space(zeta, max_degree, dom, p, cfg);
  return std::pow(std::max(0.0, minimize_energy(space, options).energy), 1.0 / p);
}

FinalBoundReport check_final_bound(const KForm& omega, const TransferOperator& t, double p,
                                   int max_degree, const QuadratureConfig& cfg,
                                   const PHarmonicOptions& options) {
  const int n = omega.dimension();
  const int k = omega.degree();
  if (!ball_admissible(n, k, p)) {
    throw AdmissibilityError("check_final_bound: needs k >= 2 and p > (n-1)/(k-1)");
  }
  const Domain u = t.outer();
  FinalBoundReport report;
  report.bound = transfer_bound(t, k, p);
  report.omega_norm = lp_norm(omega, u, p, cfg).value;
  if (omega.is_zero()) {
    report.holds = true;
    return report;
  }
  report.quotient_norm = quotient_norm(transfer_gamma(t, omega), u, p, max_degree, cfg, options);
  report.ratio = report.quotient_norm / report.omega_norm;
  report.holds = report.ratio <= report.bound;
  return report;
}

}  // namespace formbound
