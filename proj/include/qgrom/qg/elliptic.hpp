#pragma once

#include <fftw3.h>

#include <array>

#include "qgrom/field.hpp"
#include "qgrom/qg/params.hpp"

namespace qgrom::qg {

// Direct solver for (lap - lam) phi = rhs with phi = 0 on the boundary of an
// n x n grid, 5-point Laplacian, via the type-I discrete sine transform of the
// (n-2)^2 interior. Exact for the discrete operator up to round-off.
// Plans use FFTW_ESTIMATE so results do not depend on measurement timing.
class DstSolver {
public:
    DstSolver(int n, double h);
    ~DstSolver();
    DstSolver(const DstSolver&) = delete;
    DstSolver& operator=(const DstSolver&) = delete;

    // lam must exceed the gravest 1-D Laplacian eigenvalue (slightly negative
    // values are allowed); rhs boundary values are ignored; out boundary is
    // zeroed.
    void solve(const Field& rhs, double lam, Field& out);

    int n() const { return n_; }

private:
    int n_;
    double h_;
    double* buf_;
    fftw_plan plan_;
    std::vector<double> lap_eig_;  // 1-D Dirichlet Laplacian eigenvalues, k = 1..n-2
};

// Inverts the coupled elliptic system lap(psi) - S psi = q for the 3-layer
// streamfunction with spatially uniform per-layer boundary values. The
// particular solution has zero boundary data; three cached homogeneous
// solutions (unit boundary constant in one layer, zero PV) are superposed with
// coefficients fixed by the two layer-pair mass integrals and the gauge
// sum_j H_j c_j = 0.
class PvInverter {
public:
    explicit PvInverter(const QgParams& p);

    // masses0 are the reference values of integral(psi_j - psi_{j+1}), j = 1,2.
    // Returns the boundary constants; psi is fully overwritten.
    Eigen::Vector3d invert(const std::array<Field, 3>& q, const std::array<double, 2>& masses0,
                           std::array<Field, 3>& psi);

    static std::array<double, 2> layer_pair_masses(const std::array<Field, 3>& psi, double h);

    // Max-norm interior residual of lap(psi) - S psi - q, for verification.
    double residual_max(const std::array<Field, 3>& q, const std::array<Field, 3>& psi) const;

    const std::array<Field, 3>& homogeneous_solution(int k) const { return hom_[k]; }

private:
    int n_;
    double h_;
    Eigen::Matrix3d S_;
    VerticalModes modes_;
    DstSolver dst_;
    std::array<std::array<Field, 3>, 3> hom_;
    Eigen::Matrix3d mass_matrix_;
    Eigen::FullPivLU<Eigen::Matrix3d> mass_lu_;
    std::array<Field, 3> mode_rhs_, mode_phi_;
};

}  // namespace qgrom::qg
