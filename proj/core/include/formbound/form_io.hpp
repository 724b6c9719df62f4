#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>

#include "formbound/kform.hpp"

namespace formbound {

/// Parses sparse polynomial syntax such as `3/2 * x1^2 * x2 - x3 + 1/4`.
/// Variables are x1..xn (one-based). Factors may be joined by `*` or whitespace;
/// coefficients are integers, fractions a/b or terminating decimals (read exactly).
/// When n is not given it is the largest variable index seen.
Polynomial parse_polynomial(std::string_view text, std::optional<int> n = std::nullopt);

/// Canonical text: terms by descending total degree, then lexicographically.
std::string format_polynomial(const Polynomial& p);

/// Form text format, one component per line:
///
///     # comment
///     n = 2
///     k = 1
///     1 : x2
///     2 : -x1
///
/// Component lines are `j1,...,jk : <polynomial>` with one-based indices (`: f` for a
/// 0-form). The `n` and `k` headers are optional when they can be inferred from the
/// components; both are required for a form with no components.
KForm parse_form(std::string_view text);
KForm read_form_file(const std::string& path);

/// Always emits the `n` and `k` headers so the output parses back to the same form.
std::string format_form(const KForm& w);

}  // namespace formbound
