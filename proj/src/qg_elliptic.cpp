#include "qgrom/qg/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qgrom::qg {

DstSolver::DstSolver(int n, double h) : n_(n), h_(h) {
    if (n < 3) throw DomainError("DstSolver: grid must have at least 3 nodes per side");
    if (h <= 0.0) throw DomainError("DstSolver: spacing must be positive");
    const int m = n - 2;
    buf_ = fftw_alloc_real(static_cast<std::size_t>(m) * m);
    if (!buf_) throw NumericError("DstSolver: allocation failed");
    plan_ = fftw_plan_r2r_2d(m, m, buf_, buf_, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    if (!plan_) {
        fftw_free(buf_);
        throw NumericError("DstSolver: FFTW plan creation failed");
    }
    lap_eig_.resize(m);
    for (int k = 1; k <= m; ++k) {
        lap_eig_[k - 1] =
            (2.0 * std::cos(std::numbers::pi * k / (n - 1)) - 2.0) / (h * h);
    }
}

DstSolver::~DstSolver() {
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
}

void DstSolver::solve(const Field& rhs, double lam, Field& out) {
    if (rhs.nx() != n_ || rhs.ny() != n_) {
        throw ShapeError("DstSolver::solve: rhs is " + std::to_string(rhs.nx()) + "x" +
                         std::to_string(rhs.ny()) + ", solver is for " + std::to_string(n_));
    }
    require_same_shape(rhs, out, "DstSolver::solve");
    // A slightly negative lam (near-barotropic mode of a rounded S) is fine as
    // long as it stays above the gravest 1-D Laplacian eigenvalue; the 2-D
    // spectrum starts at 2*lap_eig_[0], so every denominator stays at least
    // |lap_eig_[0]| away from zero.
    if (lam <= lap_eig_[0]) {
        throw NumericError("DstSolver::solve: Helmholtz parameter too close to the "
                           "discrete Laplacian spectrum");
    }

    const int m = n_ - 2;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) buf_[j * m + i] = rhs(i + 1, j + 1);
    }
    fftw_execute(plan_);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            buf_[j * m + i] /= lap_eig_[i] + lap_eig_[j] - lam;
        }
    }
    fftw_execute(plan_);
    // RODFT00 applied twice scales by 2(n-1) per dimension.
    const double norm = 1.0 / (4.0 * (n_ - 1.0) * (n_ - 1.0));
    for (int i = 0; i < n_; ++i) {
        out(i, 0) = 0.0;
        out(i, n_ - 1) = 0.0;
        out(0, i) = 0.0;
        out(n_ - 1, i) = 0.0;
    }
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) out(i + 1, j + 1) = buf_[j * m + i] * norm;
    }
}

PvInverter::PvInverter(const QgParams& p)
    : n_(p.grid_n), h_(p.h()), S_(p.S), modes_(p.vertical_modes()), dst_(p.grid_n, p.h()) {
    for (int k = 0; k < 3; ++k) {
        mode_rhs_[k] = Field(n_, n_);
        mode_phi_[k] = Field(n_, n_);
    }

    // Homogeneous solution k: psi = chi + e_k with (lap - S) chi = S e_k, chi = 0
    // on the boundary, so psi carries boundary constant delta_{jk} and zero PV.
    for (int k = 0; k < 3; ++k) {
        const Eigen::Vector3d rhs_layers = S_.col(k);         // S e_k per layer
        const Eigen::Vector3d rhs_modes = modes_.Vinv * rhs_layers;
        for (int mo = 0; mo < 3; ++mo) {
            mode_rhs_[mo].fill(rhs_modes(mo));
            dst_.solve(mode_rhs_[mo], modes_.lambda(mo), mode_phi_[mo]);
        }
        for (int l = 0; l < 3; ++l) {
            Field& f = hom_[k][l];
            f = Field(n_, n_);
            for (int j = 0; j < n_; ++j) {
                for (int i = 0; i < n_; ++i) {
                    f(i, j) = modes_.V(l, 0) * mode_phi_[0](i, j) +
                              modes_.V(l, 1) * mode_phi_[1](i, j) +
                              modes_.V(l, 2) * mode_phi_[2](i, j);
                }
            }
            const double lift = (l == k) ? 1.0 : 0.0;
            for (std::size_t idx = 0; idx < f.size(); ++idx) f.data()[idx] += lift;
            // Pin exact boundary values; the lift above leaves them at chi + lift
            // with chi = 0 to round-off only.
            for (int i = 0; i < n_; ++i) {
                f(i, 0) = lift;
                f(i, n_ - 1) = lift;
                f(0, i) = lift;
                f(n_ - 1, i) = lift;
            }
        }
    }

    for (int k = 0; k < 3; ++k) {
        const auto masses = layer_pair_masses(hom_[k], h_);
        mass_matrix_(0, k) = masses[0];
        mass_matrix_(1, k) = masses[1];
    }
    mass_matrix_(2, 0) = p.H[0];
    mass_matrix_(2, 1) = p.H[1];
    mass_matrix_(2, 2) = p.H[2];
    mass_lu_.compute(mass_matrix_);
    if (!mass_lu_.isInvertible()) {
        throw NumericError("PvInverter: singular mass-constraint system");
    }
}

Eigen::Vector3d PvInverter::invert(const std::array<Field, 3>& q,
                                   const std::array<double, 2>& masses0,
                                   std::array<Field, 3>& psi) {
    for (int l = 0; l < 3; ++l) {
        if (q[l].nx() != n_ || q[l].ny() != n_) {
            throw ShapeError("PvInverter::invert: q layer " + std::to_string(l) +
                             " does not match the solver grid");
        }
        if (!q[l].all_finite()) {
            throw NumericError("PvInverter::invert: non-finite PV in layer " +
                               std::to_string(l));
        }
    }

    for (int mo = 0; mo < 3; ++mo) {
        Field& r = mode_rhs_[mo];
        const double a0 = modes_.Vinv(mo, 0), a1 = modes_.Vinv(mo, 1), a2 = modes_.Vinv(mo, 2);
        for (int j = 1; j < n_ - 1; ++j) {
            for (int i = 1; i < n_ - 1; ++i) {
                r(i, j) = a0 * q[0](i, j) + a1 * q[1](i, j) + a2 * q[2](i, j);
            }
        }
        dst_.solve(r, modes_.lambda(mo), mode_phi_[mo]);
    }
    for (int l = 0; l < 3; ++l) {
        if (!psi[l].same_shape(q[l])) psi[l] = Field(n_, n_);
        Field& pl = psi[l];
        const double b0 = modes_.V(l, 0), b1 = modes_.V(l, 1), b2 = modes_.V(l, 2);
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                pl(i, j) = b0 * mode_phi_[0](i, j) + b1 * mode_phi_[1](i, j) +
                           b2 * mode_phi_[2](i, j);
            }
        }
    }

    const auto part_masses = layer_pair_masses(psi, h_);
    Eigen::Vector3d rhs(masses0[0] - part_masses[0], masses0[1] - part_masses[1], 0.0);
    const Eigen::Vector3d c = mass_lu_.solve(rhs);
    if (!c.allFinite()) throw NumericError("PvInverter::invert: boundary constants not finite");

    for (int l = 0; l < 3; ++l) {
        for (int k = 0; k < 3; ++k) {
            if (c(k) != 0.0) psi[l].add_scaled(c(k), hom_[k][l]);
        }
        for (int i = 0; i < n_; ++i) {
            psi[l](i, 0) = c(l);
            psi[l](i, n_ - 1) = c(l);
            psi[l](0, i) = c(l);
            psi[l](n_ - 1, i) = c(l);
        }
    }
    return c;
}

std::array<double, 2> PvInverter::layer_pair_masses(const std::array<Field, 3>& psi, double h) {
    std::array<double, 2> m;
    for (int j = 0; j < 2; ++j) {
        Field diff = psi[j];
        diff.add_scaled(-1.0, psi[j + 1]);
        m[j] = diff.integral(h);
    }
    return m;
}

double PvInverter::residual_max(const std::array<Field, 3>& q,
                                const std::array<Field, 3>& psi) const {
    double r = 0.0;
    const double ih2 = 1.0 / (h_ * h_);
    for (int l = 0; l < 3; ++l) {
        for (int j = 1; j < n_ - 1; ++j) {
            for (int i = 1; i < n_ - 1; ++i) {
                const double lap = (psi[l](i + 1, j) + psi[l](i - 1, j) + psi[l](i, j + 1) +
                                    psi[l](i, j - 1) - 4.0 * psi[l](i, j)) *
                                   ih2;
                const double sp = S_(l, 0) * psi[0](i, j) + S_(l, 1) * psi[1](i, j) +
                                  S_(l, 2) * psi[2](i, j);
                r = std::max(r, std::abs(lap - sp - q[l](i, j)));
            }
        }
    }
    return r;
}

}  // namespace qgrom::qg
