#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgrom/field.hpp"

namespace qgrom::io {

// Binary PPM (P6) heatmap with a 255-entry blue-white-red diverging colormap,
// piecewise linear between (0.230,0.299,0.754), (0.865,0.865,0.865) and
// (0.706,0.016,0.150). Index 127 is the exact center. Image row 0 is the
// northern edge (j = ny-1).
//
// Default range is symmetric about the data midpoint, so a constant field maps
// to the uniform center color and negating an antisymmetric field mirrors the
// colors exactly. Passing range renders [center-range, center+range] about 0.
std::vector<unsigned char> render_ppm(const Field& f, std::optional<double> range);

void save_ppm(const std::string& path, const Field& f, std::optional<double> range);

}  // namespace qgrom::io
