#include "qgrom/qg/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qgrom::qg {

double QgParams::default_dt(int grid_n) {
    return 86400.0 / 40.0 * 128.0 / (grid_n - 1);
}

Eigen::Matrix3d QgParams::default_S() {
    Eigen::Matrix3d s;
    // km^-2 values; converted to m^-2 below.
    s << 1.19e-3, -1.19e-3, 0.0,
        -3.95e-4, 1.14e-3, -7.47e-4,
        0.0, -1.87e-4, 1.87e-4;
    return s * 1e-6;
}

QgParams QgParams::defaults(int grid_n) {
    QgParams p;
    p.beta = 2.0e-11;
    p.mu = 4.0e-8;
    p.nu = 50.0;
    p.tau0 = 0.03;
    p.L = 3.84e6;
    p.H = {250.0, 750.0, 3000.0};
    p.S = default_S();
    p.alpha = 1.2e5;
    p.f0 = 0.83e-4;
    p.rho0 = 1000.0;
    p.forcing_scale = 1.0 / (p.rho0 * p.H[0] * p.L);
    p.dt = default_dt(grid_n);
    p.grid_n = grid_n;
    p.ra_filter = 0.01;
    return p;
}

void QgParams::validate() const {
    if (grid_n < 3 || grid_n % 2 == 0) {
        throw DomainError("QgParams: grid_n must be odd and >= 3, got " +
                          std::to_string(grid_n));
    }
    if (L <= 0.0) throw DomainError("QgParams: L must be positive");
    for (double d : H) {
        if (d <= 0.0) throw DomainError("QgParams: layer depths must be positive");
    }
    if (dt <= 0.0) throw DomainError("QgParams: dt must be positive");
    if (alpha <= 0.0) throw ConfigError("QgParams: alpha must be positive");
    if (nu < 0.0 || mu < 0.0) throw DomainError("QgParams: mu, nu must be non-negative");
    if (rho0 <= 0.0) throw DomainError("QgParams: rho0 must be positive");
    if (ra_filter < 0.0 || ra_filter >= 1.0) {
        throw DomainError("QgParams: ra_filter must lie in [0, 1)");
    }
    vertical_modes();  // throws if S is defective or negative beyond rounding slack
}

VerticalModes QgParams::vertical_modes() const {
    Eigen::EigenSolver<Eigen::Matrix3d> es(S);
    if (es.info() != Eigen::Success) {
        throw ConfigError("stratification matrix: eigendecomposition failed");
    }
    const double scale = S.cwiseAbs().maxCoeff();
    for (int i = 0; i < 3; ++i) {
        if (std::abs(es.eigenvalues()(i).imag()) > 1e-8 * scale) {
            throw ConfigError("stratification matrix: complex eigenvalue");
        }
    }
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });

    VerticalModes m;
    for (int k = 0; k < 3; ++k) {
        m.lambda(k) = es.eigenvalues()(order[k]).real();
        m.V.col(k) = es.eigenvectors().col(order[k]).real();
    }
    // Rounded stratification coefficients can leave the barotropic eigenvalue a
    // hair below zero; keep the exact value so V diag(lambda) Vinv reproduces S
    // to round-off, and reject only eigenvalues negative beyond rounding slack.
    const double lmax = m.lambda.cwiseAbs().maxCoeff();
    if (m.lambda(0) < -1e-2 * lmax) {
        throw ConfigError("stratification matrix: negative eigenvalue " +
                          std::to_string(m.lambda(0)));
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(m.V);
    if (!lu.isInvertible()) {
        throw ConfigError("stratification matrix: defective eigenvector basis");
    }
    m.Vinv = lu.inverse();
    return m;
}

}  // namespace qgrom::qg
