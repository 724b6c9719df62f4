#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "formbound/lipschitz_map.hpp"

namespace formbound {

/// A polynomial map with its claimed Lipschitz constant and, optionally, its inverse.
struct MapSpec {
  LipschitzMap map;
  std::optional<LipschitzMap> inverse;
};

/// Map text format:
///
///     # comment
///     n = 2
///     C = 2
///     phi1 = 2 * x1
///     phi2 = 2 * x2
///     inverse_C = 1/2      (optional, with inv1..invn)
///     inv1 = 1/2 * x1
///     inv2 = 1/2 * x2
///
/// Throws ParseError on unknown keys, missing components or a malformed constant.
MapSpec parse_map(std::string_view text);
MapSpec read_map_file(const std::string& path);

}  // namespace formbound
