#pragma once

#include "formbound/kform.hpp"

namespace formbound {

struct HomotopyResult {
  KForm primitive;  // S w
  KForm residual;   // w - dSw - Sdw (w - dSw for top-degree w)
};

/// The radial homotopy operator: S w = int_0^1 t^(k-1) (i_x w)(t x) dt.
/// On the part of w with homogeneous coefficients of degree m the integral is the
/// exact factor 1/(k+m). Throws DegreeError for 0-forms.
KForm homotopy_S(const KForm& w);

/// w - d(S w) - S(d w); the S(d w) term is absent when k = n. For a 0-form f this
/// leaves the constant f(0), since S f is not defined.
KForm poincare_residual(const KForm& w);

HomotopyResult apply_homotopy(const KForm& w);

}  // namespace formbound
