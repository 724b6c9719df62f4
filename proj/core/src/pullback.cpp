#include "formbound/pullback.hpp"

#include <Eigen/Dense>

#include "formbound/errors.hpp"

namespace formbound {

namespace {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

// Laplace expansion along the first selected row.
Polynomial minor(const PolyMatrix& jac, std::span<const int> rows, std::span<const int> cols,
                 int n) {
  if (rows.empty()) return Polynomial::constant(n, 1);
  Polynomial det(n);
  std::vector<int> rest_cols;
  int sign = 1;
  for (std::size_t c = 0; c < cols.size(); ++c, sign = -sign) {
    const Polynomial& entry = jac[rows[0]][cols[c]];
    if (entry.is_zero()) continue;
    rest_cols.assign(cols.begin(), cols.end());
    rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(c));
    Polynomial sub = minor(jac, rows.subspan(1), rest_cols, n);
    if (sub.is_zero()) continue;
    if (sign > 0) {
      det += entry * sub;
    } else {
      det -= entry * sub;
    }
  }
  return det;
}

}  // namespace

KForm pullback(const LipschitzMap& phi, const KForm& w) {
  const int n = w.dimension();
  if (phi.dimension() != n) throw DimensionError("pullback: map and form dimensions differ");
  const auto& comps = phi.components();
  const int k = w.degree();
  PolyMatrix jac(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) jac[i].push_back(comps[i].derivative(j));
  }
  const auto targets = all_multi_indices(n, k);
  KForm out(n, k);
  for (const auto& [J, f] : w.coefficients()) {
    const Polynomial g = f.compose(comps);
    const std::vector<int> rows = J.indices();
    for (const auto& I : targets) {
      const std::vector<int> cols = I.indices();
      const Polynomial m = minor(jac, rows, cols, n);
      if (!m.is_zero()) out.add(I, g * m);
    }
  }
  return out;
}

void pullback_at(const LipschitzMap& phi, const NumericForm& w, std::span<const double> x,
                 std::span<double> out) {
  const int n = w.dimension();
  if (phi.dimension() != n) throw DimensionError("pullback_at: map and form dimensions differ");
  const int k = w.degree();
  const Eigen::MatrixXd jac = phi.jacobian(x);
  const Point y = phi.apply(x);
  std::vector<double> values(w.size());
  w.evaluate(y, values);
  const auto& basis = w.basis();
  std::fill(out.begin(), out.end(), 0.0);
  Eigen::MatrixXd sub(k, k);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (values[a] == 0) continue;
    const auto rows = basis[a].indices();
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const auto cols = basis[b].indices();
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) sub(r, c) = jac(rows[r], cols[c]);
      }
      out[b] += values[a] * (k == 0 ? 1.0 : sub.determinant());
    }
  }
}

}  // namespace formbound
