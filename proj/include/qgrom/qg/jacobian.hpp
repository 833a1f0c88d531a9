#pragma once

#include "qgrom/field.hpp"

namespace qgrom::qg {

// Energy- and enstrophy-conserving 9-point Jacobian J(f,g) = f_x g_y - f_y g_x,
// the average of the three second-order forms J++, J+x, Jx+. Interior values
// use the full 3x3 stencil (boundary rows of f and g are read). Wall rows of
// out carry a closure built from cross-wall differences (zero at corners and
// for linear fields) so that for fields vanishing on the boundary the sums
// of J, fJ and gJ over the whole grid cancel to round-off.
void arakawa_jacobian(const Field& f, const Field& g, double h, Field& out);

}  // namespace qgrom::qg
