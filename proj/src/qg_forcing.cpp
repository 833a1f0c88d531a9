#include "qgrom/qg/forcing.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qgrom::qg {

double wind_curl(double x, double y, double L, double tau0) {
    const double pi = std::numbers::pi;
    const double y0 = 0.4 * L + 0.2 * x;
    if (y < y0) return -1.80 * pi * tau0 * std::sin(pi * y / y0);
    return 2.22 * pi * tau0 * std::sin(pi * (y - y0) / (L - y0));
}

double wind_forcing(double x, double y, const QgParams& p) {
    const double slack = 1e-12 * p.L;
    if (x < -slack || x > p.L + slack || y < -slack || y > p.L + slack) {
        throw DomainError("wind_forcing: coordinates (" + std::to_string(x) + ", " +
                          std::to_string(y) + ") outside [0, " + std::to_string(p.L) + "]^2");
    }
    return p.forcing_scale * wind_curl(x, y, p.L, p.tau0);
}

Field forcing_field(const QgParams& p) {
    const int n = p.grid_n;
    const double h = p.h();
    Field f(n, n);
    for (int j = 0; j < n; ++j) {
        const double y = j * h;
        for (int i = 0; i < n; ++i) {
            f(i, j) = p.forcing_scale * wind_curl(i * h, y, p.L, p.tau0);
        }
    }
    return f;
}

}  // namespace qgrom::qg
