#pragma once

#include <cstdint>

#include "formbound/domain.hpp"
#include "formbound/kform.hpp"
#include "formbound/lipschitz_map.hpp"

namespace formbound {

/// gamma = beta* S alpha* on U = alpha(V), where V is a centered ball,
/// alpha: V -> U and beta: U -> V are mutually inverse.
struct TransferOperator {
  LipschitzMap alpha;
  LipschitzMap beta;
  Domain inner;  // V

  /// U = alpha(V), carrying beta as the inverse.
  Domain outer() const;
};

/// Checks alpha o beta == id exactly (polynomial maps) and returns the operator.
/// Throws UnsupportedMapError for non-polynomial maps, ParameterError if they are not inverse.
TransferOperator make_transfer(const LipschitzMap& alpha, const LipschitzMap& beta,
                               double inner_radius);

/// beta* S alpha* w. Throws NotClosedError unless dw == 0.
KForm transfer_gamma(const TransferOperator& t, const KForm& w);

/// Norm M of S on k-forms over B(r): bound_ball for k >= 2, bound_one_form for k = 1
/// and n >= 2, bound_interval for n = 1.
double homotopy_bound(int n, int k, double p, double r);

/// L^p operator norm bound of the pullback along a map with constant c_map whose inverse
/// has constant c_inverse: n!/(n-j)! c_map^j (n! c_inverse^n)^(1/p) on j-forms.
double pullback_norm_bound(int n, int j, double p, double c_map, double c_inverse);

/// ||beta*||_(k-1) * M * ||alpha*||_k with M = homotopy_bound on V. Reduces to
/// bound_bilipschitz(n, k, p, C, M) when alpha and beta have constants 1/C and C.
double transfer_bound(const TransferOperator& t, int k, double p);

/// The radial map of the standard simplex onto the ball around its barycenter b of
/// radius R = max |v - b| over vertices: x -> b + R (x - b) / rho(x - b), with rho the
/// distance from b to the boundary in that direction. Carries its inverse; the constant
/// is n^2.
LipschitzMap simplex_map(int n);

/// Barycenter and radius of the ball simplex_map(n) maps onto.
std::pair<Point, double> simplex_ball(int n);

/// Largest |phi(u) - phi(v)| / |u - v| over random pairs in dom.
double sampled_lipschitz_quotient(const LipschitzMap& phi, const Domain& dom, std::size_t pairs,
                                  std::uint64_t seed);

/// Largest spectral norm of the Jacobian over random points of dom.
double sampled_jacobian_norm(const LipschitzMap& phi, const Domain& dom, std::size_t samples,
                             std::uint64_t seed);

/// Largest |phi(phi^-1(y)) - y| over random points y of phi's image of dom.
double sampled_inverse_defect(const LipschitzMap& phi, const Domain& dom, std::size_t samples,
                              std::uint64_t seed);

}  // namespace formbound
