#pragma once

#include "qgrom/field.hpp"

namespace qgrom::qg {

// Fills the boundary ring of zeta with the partial-slip relative vorticity
// derived from psi via ghost elimination: the centered wall Laplacian and the
// centered inward normal derivative combine into
//   zeta = 2 (psi_in - psi_wall) / (h (h + 2 alpha)),
// which is Thom's no-slip formula at alpha -> 0 and a stress-free wall at
// alpha -> inf. Corner nodes average the two incident directions. Interior
// values of zeta are untouched. psi is expected to be spatially uniform along
// the boundary (no-flow-through), so the tangential part of the Laplacian
// vanishes there.
void apply_boundary_vorticity(const Field& psi, double alpha, double h, Field& zeta);

}  // namespace qgrom::qg
