#include "qgrom/qg/boundary.hpp"

namespace qgrom::qg {

namespace {
// Ghost-point closure of the partial-slip relation: eliminating the ghost value
// between the centered wall Laplacian and the centered normal derivative gives
// a wall vorticity that interpolates Thom's no-slip formula (alpha -> 0) and
// the stress-free wall (alpha -> inf). p0 on the wall, p1 the inward neighbor.
inline double slip_vorticity(double p0, double p1, double alpha, double h) {
    return 2.0 * (p1 - p0) / (h * (h + 2.0 * alpha));
}
}  // namespace

void apply_boundary_vorticity(const Field& psi, double alpha, double h, Field& zeta) {
    require_same_shape(psi, zeta, "apply_boundary_vorticity");
    if (alpha <= 0.0) throw ConfigError("apply_boundary_vorticity: alpha must be positive");
    const int nx = psi.nx(), ny = psi.ny();
    if (nx < 4 || ny < 4) {
        throw DomainError("apply_boundary_vorticity: grid must be at least 4 nodes per side");
    }

    for (int i = 1; i < nx - 1; ++i) {
        zeta(i, 0) = slip_vorticity(psi(i, 0), psi(i, 1), alpha, h);
        zeta(i, ny - 1) = slip_vorticity(psi(i, ny - 1), psi(i, ny - 2), alpha, h);
    }
    for (int j = 1; j < ny - 1; ++j) {
        zeta(0, j) = slip_vorticity(psi(0, j), psi(1, j), alpha, h);
        zeta(nx - 1, j) = slip_vorticity(psi(nx - 1, j), psi(nx - 2, j), alpha, h);
    }

    const int iw = 0, ie = nx - 1, js = 0, jn = ny - 1;
    zeta(iw, js) = 0.5 * (slip_vorticity(psi(iw, js), psi(iw + 1, js), alpha, h) +
                          slip_vorticity(psi(iw, js), psi(iw, js + 1), alpha, h));
    zeta(ie, js) = 0.5 * (slip_vorticity(psi(ie, js), psi(ie - 1, js), alpha, h) +
                          slip_vorticity(psi(ie, js), psi(ie, js + 1), alpha, h));
    zeta(iw, jn) = 0.5 * (slip_vorticity(psi(iw, jn), psi(iw + 1, jn), alpha, h) +
                          slip_vorticity(psi(iw, jn), psi(iw, jn - 1), alpha, h));
    zeta(ie, jn) = 0.5 * (slip_vorticity(psi(ie, jn), psi(ie - 1, jn), alpha, h) +
                          slip_vorticity(psi(ie, jn), psi(ie, jn - 1), alpha, h));
}

}  // namespace qgrom::qg
