#pragma once

#include <span>

#include "formbound/kform.hpp"
#include "formbound/lipschitz_map.hpp"

namespace formbound {

/// phi* w = sum_J (f_J o phi) sum_I det(d phi_J / d x_I) dx_I, exactly.
/// Throws UnsupportedMapError for maps without polynomial components.
KForm pullback(const LipschitzMap& phi, const KForm& w);

/// (phi* w)_x for any map with a Jacobian; components in all_multi_indices order.
void pullback_at(const LipschitzMap& phi, const NumericForm& w, std::span<const double> x,
                 std::span<double> out);

}  // namespace formbound
