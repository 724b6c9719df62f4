#include "formbound/homotopy.hpp"

#include "formbound/errors.hpp"

namespace formbound {

KForm homotopy_S(const KForm& w) {
  if (w.degree() == 0) throw DegreeError("homotopy_S: undefined on 0-forms");
  KForm out(w.dimension(), w.degree() - 1);
  const int top = w.polynomial_degree();
  for (int m = 0; m <= top; ++m) {
    const KForm part = w.homogeneous_part(m);
    if (part.is_zero()) continue;
    out += interior_radial(part) * Rational(1, w.degree() + m);
  }
  return out;
}

KForm poincare_residual(const KForm& w) {
  KForm r = w;
  if (w.degree() >= 1) r -= exterior_derivative(homotopy_S(w));
  if (w.degree() < w.dimension()) {
    r -= homotopy_S(exterior_derivative(w));
  }
  return r;
}

HomotopyResult apply_homotopy(const KForm& w) {
  return {homotopy_S(w), poincare_residual(w)};
}

}  // namespace formbound
