#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace formbound {

double binomial(int n, int k);
double factorial_d(int n);

/// p > (n-1)/(k-1) with n >= 2 and 2 <= k <= n.
bool ball_admissible(int n, int k, double p);

/// r sqrt(C(n,k)) / (p(k-1) - n + 1)^(1/p): norm bound for S on k-forms over B(r).
/// Throws AdmissibilityError outside ball_admissible.
double bound_ball(int n, int k, double p, double r = 1.0);

/// r^(1 + (n-1)/p) sqrt(n) / (p + n - 1)^(1/p): bound for S on 1-forms over B(r), n >= 2.
double bound_one_form(int n, double p, double r = 1.0);

/// 2r: bound for S on ]-r, r[.
double bound_interval(double r);

/// sqrt(C(n,k)) (n-k+1) / (n^2 (p(k-1)-n+1)^(1/p)) * (n!^((p+1)/p) / (n-k+1)!)^2.
double bound_simplex(int n, int k, double p);

/// M (n-k+1) / C * (n!^((p+1)/p) / (n-k+1)!)^2 for a C-bi-Lipschitz image of a domain
/// whose homotopy operator has norm M.
double bound_bilipschitz(int n, int k, double p, double C, double M);

/// r * 2 pi^(n/2) / Gamma(n/2): the L^1 norm of |x|^(1-n) over B(r).
double gt06_sphere_constant(int n, double r = 1.0);

/// gt06_sphere_constant(n, 1) over its Stirling approximation (Gamma(x+1) ~ x^x sqrt(2 pi x) e^-x
/// at x = n/2). Increases to 1.
double stirling_ratio(int n);

/// n! C^k / (n-k)!: pointwise bound |phi* w|_x <= value * |w|_phi(x) for a C-Lipschitz phi.
double pullback_pointwise_bound(int n, int k, double C);

struct PullbackOperatorBounds {
  double beta;   // n!^((p+1)/p) / (n-k)! * C^((pk-n)/p)
  double alpha;  // n!^((p+1)/p) / (n-k)! * C^((n-pk)/p)
};
PullbackOperatorBounds pullback_operator_bounds(int n, int k, double p, double C);

/// Rows k = 1..n, one column per p; nullopt marks an inadmissible cell.
struct AppendixTable {
  int n = 0;
  std::vector<double> p_values;
  std::vector<std::vector<std::optional<double>>> rows;
};
AppendixTable appendix_table(int n, const std::vector<double>& p_values);

/// S acting on (k+1)-forms in R^(n+1): sqrt(C(n+1,k+1)) / (pk-n)^(1/p) next to the
/// closed-form Stirling estimate of it. Reported only; pk > n required.
struct AsymptoticRow {
  int n = 0;
  int k = 0;
  double p = 0;
  double constant = 0;
  double estimate = 0;
};
AsymptoticRow asymptotic_row(int n, int k, double p);

struct BoundSpec {
  enum class Kind {
    ball,
    interval,
    one_form,
    simplex,
    bilipschitz,
    gt06_sphere,
    pullback_pointwise,
    pullback_operator_beta,
    pullback_operator_alpha
  };
  Kind kind = Kind::ball;
  int n = 2;
  int k = 2;
  double p = 2.0;
  double r = 1.0;
  double C = 1.0;
  double M = 1.0;

  bool admissible() const;
  /// Throws AdmissibilityError or ParameterError like the underlying function.
  double evaluate() const;
};

std::string to_string(BoundSpec::Kind kind);

}  // namespace formbound
