#pragma once

#include <cstdint>
#include <random>

#include "formbound/kform.hpp"
#include "formbound/lipschitz_map.hpp"

namespace formbound {

struct RandomFormOptions {
  int max_degree = 3;
  /// Probability that a given monomial of degree <= max_degree is present.
  double density = 0.35;
  /// Coefficients are p/q with |p| <= numerator_bound and 1 <= q <= denominator_bound.
  int numerator_bound = 9;
  int denominator_bound = 4;
};

/// Random polynomial k-form on R^n; never the zero form unless k is out of range.
KForm random_form(int n, int k, const RandomFormOptions& options, std::mt19937_64& rng);

/// Random polynomial in n variables with the same coefficient law.
Polynomial random_polynomial(int n, const RandomFormOptions& options, std::mt19937_64& rng);

/// d of a random (k-1)-form: a random closed (indeed exact) k-form, k >= 1.
KForm random_closed_form(int n, int k, const RandomFormOptions& options, std::mt19937_64& rng);

/// x -> A x + b with small rational entries, A scaled so its spectral norm is at most C;
/// the map carries C as its certified constant.
LipschitzMap random_affine_map(int n, double C, std::mt19937_64& rng);

/// Every exponent vector of n variables with total degree <= max_degree, graded order.
std::vector<Exponent> exponents_up_to(int n, int max_degree);

}  // namespace formbound
