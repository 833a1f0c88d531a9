#include "qgrom/qg/jacobian.hpp"

namespace qgrom::qg {

namespace {

// Wall closure restoring the discrete integral identity. The interior stencil
// sum telescopes to a circulation around the first interior ring; this
// radial-difference x tangential-difference form, written onto the wall ring,
// cancels it exactly for wall-vanishing fields. Built purely from differences
// of both arguments, so constant arguments still annihilate it, it stays
// antisymmetric, and it vanishes identically for linear fields.
double wall_term(double tf_in, double tf_wall, double rf, double tg_in, double tg_wall,
                 double rg, double c) {
    return c * ((tf_in - tf_wall) * rg - rf * (tg_in - tg_wall));
}

}  // namespace

void arakawa_jacobian(const Field& f, const Field& g, double h, Field& out) {
    require_same_shape(f, g, "arakawa_jacobian");
    require_same_shape(f, out, "arakawa_jacobian");
    const int nx = f.nx(), ny = f.ny();
    const double c = 1.0 / (12.0 * h * h);  // (1/3 average) * (1/4h^2)

    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            const double j1 = (f(i + 1, j) - f(i - 1, j)) * (g(i, j + 1) - g(i, j - 1)) -
                              (f(i, j + 1) - f(i, j - 1)) * (g(i + 1, j) - g(i - 1, j));
            const double j2 = f(i + 1, j) * (g(i + 1, j + 1) - g(i + 1, j - 1)) -
                              f(i - 1, j) * (g(i - 1, j + 1) - g(i - 1, j - 1)) -
                              f(i, j + 1) * (g(i + 1, j + 1) - g(i - 1, j + 1)) +
                              f(i, j - 1) * (g(i + 1, j - 1) - g(i - 1, j - 1));
            const double j3 = f(i + 1, j + 1) * (g(i, j + 1) - g(i + 1, j)) -
                              f(i - 1, j - 1) * (g(i - 1, j) - g(i, j - 1)) -
                              f(i - 1, j + 1) * (g(i, j + 1) - g(i - 1, j)) +
                              f(i + 1, j - 1) * (g(i + 1, j) - g(i, j - 1));
            out(i, j) = c * (j1 + j2 + j3);
        }
    }

    out(0, 0) = out(nx - 1, 0) = out(0, ny - 1) = out(nx - 1, ny - 1) = 0.0;
    for (int i = 1; i < nx - 1; ++i) {
        out(i, 0) = wall_term(f(i + 1, 1) - f(i - 1, 1), f(i + 1, 0) - f(i - 1, 0),
                              f(i, 1) - f(i, 0), g(i + 1, 1) - g(i - 1, 1),
                              g(i + 1, 0) - g(i - 1, 0), g(i, 1) - g(i, 0), c);
        out(i, ny - 1) =
            -wall_term(f(i + 1, ny - 2) - f(i - 1, ny - 2), f(i + 1, ny - 1) - f(i - 1, ny - 1),
                       f(i, ny - 2) - f(i, ny - 1), g(i + 1, ny - 2) - g(i - 1, ny - 2),
                       g(i + 1, ny - 1) - g(i - 1, ny - 1), g(i, ny - 2) - g(i, ny - 1), c);
    }
    for (int j = 1; j < ny - 1; ++j) {
        out(0, j) = -wall_term(f(1, j + 1) - f(1, j - 1), f(0, j + 1) - f(0, j - 1),
                               f(1, j) - f(0, j), g(1, j + 1) - g(1, j - 1),
                               g(0, j + 1) - g(0, j - 1), g(1, j) - g(0, j), c);
        out(nx - 1, j) =
            wall_term(f(nx - 2, j + 1) - f(nx - 2, j - 1), f(nx - 1, j + 1) - f(nx - 1, j - 1),
                      f(nx - 2, j) - f(nx - 1, j), g(nx - 2, j + 1) - g(nx - 2, j - 1),
                      g(nx - 1, j + 1) - g(nx - 1, j - 1), g(nx - 2, j) - g(nx - 1, j), c);
    }
}

}  // namespace qgrom::qg
