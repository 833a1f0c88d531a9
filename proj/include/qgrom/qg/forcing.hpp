#pragma once

#include "qgrom/field.hpp"
#include "qgrom/qg/params.hpp"

namespace qgrom::qg {

// Asymmetric double-gyre wind curl, unscaled (carries tau0's N m^-2):
//   -1.80 pi tau0 sin(pi y / y0)             for y <  y0(x)
//   +2.22 pi tau0 sin(pi (y-y0) / (L-y0))    for y >= y0(x)
// with the tilted zero line y0(x) = 0.4 L + 0.2 x.
double wind_curl(double x, double y, double L, double tau0);

// forcing_scale * wind_curl, the layer-1 PV tendency in s^-2.
// Coordinates must lie in [0, L] (1e-12 relative slack for rounded nodes).
double wind_forcing(double x, double y, const QgParams& p);

// Forcing sampled at every grid node.
Field forcing_field(const QgParams& p);

}  // namespace qgrom::qg
