#pragma once

#include <Eigen/Dense>
#include <array>

#include "qgrom/common.hpp"

namespace qgrom::qg {

// Vertical-mode decomposition of the stratification matrix: S = V diag(lambda) V^-1,
// eigenvalues ascending in m^-2 and kept exact so the factorization reproduces
// S to round-off. Rounded coefficients can leave the barotropic eigenvalue
// slightly negative; that is well-posed as long as it stays well inside the
// gravest Poisson eigenvalue -2(pi/L)^2.
struct VerticalModes {
    Eigen::Matrix3d V;
    Eigen::Matrix3d Vinv;
    Eigen::Vector3d lambda;
};

struct QgParams {
    double beta;    // planetary vorticity gradient, m^-1 s^-1
    double mu;      // bottom friction, s^-1
    double nu;      // lateral eddy viscosity, m^2 s^-1
    double tau0;    // wind stress amplitude, N m^-2
    double L;       // basin side, m
    std::array<double, 3> H;  // layer depths, m
    Eigen::Matrix3d S;        // stratification matrix, m^-2
    double alpha;   // partial-slip length, m
    double f0;      // Coriolis parameter, s^-1
    double rho0;    // reference density, kg m^-3
    double forcing_scale;  // converts the wind-curl expression to s^-2
    double dt;      // time step, s
    int grid_n;     // nodes per side, odd
    double ra_filter;  // Robert-Asselin coefficient

    double h() const { return L / (grid_n - 1); }

    // 1/40 day at 129 nodes per side, halved per grid doubling.
    static double default_dt(int grid_n);
    static Eigen::Matrix3d default_S();
    static QgParams defaults(int grid_n);

    void validate() const;
    VerticalModes vertical_modes() const;
};

}  // namespace qgrom::qg
