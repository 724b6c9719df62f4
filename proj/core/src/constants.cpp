#include "formbound/constants.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "formbound/errors.hpp"

namespace formbound {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be positive and finite");
  }
}

std::string triple(int n, int k, double p) {
  return "(n=" + std::to_string(n) + ", k=" + std::to_string(k) + ", p=" + std::to_string(p) + ")";
}

// (n!^((p+1)/p) / m!)^2
double factorial_square(int n, int m, double p) {
  const double log_value = (p + 1) / p * std::lgamma(n + 1.0) - std::lgamma(m + 1.0);
  return std::exp(2 * log_value);
}

}  // namespace

double factorial_d(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

bool ball_admissible(int n, int k, double p) {
  return n >= 2 && k >= 2 && k <= n && p * (k - 1) - n + 1 > 0;
}

double bound_ball(int n, int k, double p, double r) {
  require_positive(r, "radius");
  if (!ball_admissible(n, k, p)) throw AdmissibilityError("bound_ball: inadmissible " + triple(n, k, p));
  return r * std::sqrt(binomial(n, k)) / std::pow(p * (k - 1) - n + 1, 1.0 / p);
}

double bound_one_form(int n, double p, double r) {
  require_positive(r, "radius");
  if (n < 2) throw AdmissibilityError("bound_one_form: needs n >= 2; use bound_interval for n = 1");
  if (p < 1) throw ParameterError("bound_one_form: p must be at least 1");
  return std::pow(r, 1 + (n - 1) / p) * std::sqrt(static_cast<double>(n)) /
         std::pow(p + n - 1, 1.0 / p);
}

double bound_interval(double r) {
  require_positive(r, "radius");
  return 2 * r;
}

double bound_simplex(int n, int k, double p) {
  if (!ball_admissible(n, k, p)) {
    throw AdmissibilityError("bound_simplex: inadmissible " + triple(n, k, p));
  }
  return std::sqrt(binomial(n, k)) * (n - k + 1) /
         (n * n * std::pow(p * (k - 1) - n + 1, 1.0 / p)) * factorial_square(n, n - k + 1, p);
}

double bound_bilipschitz(int n, int k, double p, double C, double M) {
  require_positive(C, "C");
  require_positive(M, "M");
  if (k < 0 || k > n) throw DegreeError("bound_bilipschitz: k out of range");
  if (p < 1) throw ParameterError("bound_bilipschitz: p must be at least 1");
  return M * (n - k + 1) / C * factorial_square(n, n - k + 1, p);
}

double gt06_sphere_constant(int n, double r) {
  if (n < 2) throw AdmissibilityError("gt06_sphere_constant: needs n >= 2");
  require_positive(r, "radius");
  return r * 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double stirling_ratio(int n) {
  if (n < 1) throw ParameterError("stirling_ratio: needs n >= 1");
  const double x = n / 2.0;
  const double log_stirling = x * std::log(x) + 0.5 * std::log(2 * std::numbers::pi * x) - x;
  return std::exp(log_stirling - std::lgamma(x + 1));
}

double pullback_pointwise_bound(int n, int k, double C) {
  require_positive(C, "C");
  if (k < 0 || k > n) throw DegreeError("pullback_pointwise_bound: k out of range");
  return factorial_d(n) * std::pow(C, k) / factorial_d(n - k);
}

PullbackOperatorBounds pullback_operator_bounds(int n, int k, double p, double C) {
  require_positive(C, "C");
  if (k < 0 || k > n) throw DegreeError("pullback_operator_bounds: k out of range");
  if (p < 1) throw ParameterError("pullback_operator_bounds: p must be at least 1");
  const double base = std::pow(factorial_d(n), (p + 1) / p) / factorial_d(n - k);
  return {base * std::pow(C, (p * k - n) / p), base * std::pow(C, (n - p * k) / p)};
}

AppendixTable appendix_table(int n, const std::vector<double>& p_values) {
  if (n < 2) throw AdmissibilityError("appendix_table: needs n >= 2");
  if (p_values.empty()) throw ParameterError("appendix_table: no p values");
  AppendixTable table{n, p_values, {}};
  for (int k = 1; k <= n; ++k) {
    std::vector<std::optional<double>> row;
    for (double p : p_values) {
      if (ball_admissible(n, k, p)) {
        row.emplace_back(bound_ball(n, k, p, 1.0));
      } else {
        row.emplace_back(std::nullopt);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

AsymptoticRow asymptotic_row(int n, int k, double p) {
  if (k < 0 || k > n || p * k - n <= 0) {
    throw AdmissibilityError("asymptotic_row: needs pk > n, " + triple(n, k, p));
  }
  AsymptoticRow row{n, k, p, 0, 0};
  const double denom = std::pow(p * k - n, 1.0 / p);
  row.constant = std::sqrt(binomial(n + 1, k + 1)) / denom;
  const double log_tail = (2.0 * n + 3) / 4 * std::log(n + 1.0) -
                          (2.0 * k + 3) / 4 * std::log(k + 1.0) -
                          (2.0 * (n - k) + 7) / 4 * std::log(n - k + 1.0);
  row.estimate = std::exp(0.5 - 0.25 * std::log(2 * std::numbers::pi) + log_tail) / denom;
  return row;
}

bool BoundSpec::admissible() const {
  try {
    (void)evaluate();
    return true;
  } catch (const AdmissibilityError&) {
    return false;
  }
}

double BoundSpec::evaluate() const {
  switch (kind) {
    case Kind::ball:
      return bound_ball(n, k, p, r);
    case Kind::interval:
      return bound_interval(r);
    case Kind::one_form:
      return bound_one_form(n, p, r);
    case Kind::simplex:
      return bound_simplex(n, k, p);
    case Kind::bilipschitz:
      return bound_bilipschitz(n, k, p, C, M);
    case Kind::gt06_sphere:
      return gt06_sphere_constant(n, r);
    case Kind::pullback_pointwise:
      return pullback_pointwise_bound(n, k, C);
    case Kind::pullback_operator_beta:
      return pullback_operator_bounds(n, k, p, C).beta;
    case Kind::pullback_operator_alpha:
      return pullback_operator_bounds(n, k, p, C).alpha;
  }
  throw ParameterError("BoundSpec: unknown kind");
}

std::string to_string(BoundSpec::Kind kind) {
  switch (kind) {
    case BoundSpec::Kind::ball: return "ball";
    case BoundSpec::Kind::interval: return "interval";
    case BoundSpec::Kind::one_form: return "one_form";
    case BoundSpec::Kind::simplex: return "simplex";
    case BoundSpec::Kind::bilipschitz: return "bilipschitz";
    case BoundSpec::Kind::gt06_sphere: return "gt06_sphere";
    case BoundSpec::Kind::pullback_pointwise: return "pullback_pointwise";
    case BoundSpec::Kind::pullback_operator_beta: return "pullback_operator_beta";
    case BoundSpec::Kind::pullback_operator_alpha: return "pullback_operator_alpha";
  }
  return "unknown";
}

}  // namespace formbound
