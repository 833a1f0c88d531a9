#pragma once

#include <functional>
#include <optional>

#include "qgrom/qg/elliptic.hpp"

namespace qgrom::qg {

// One time level: PV, its inverted streamfunction, relative vorticity with
// partial-slip boundary values, and the per-layer boundary constants.
struct ModelLevel {
    std::array<Field, 3> q, psi, zeta;
    Eigen::Vector3d constants = Eigen::Vector3d::Zero();
};

// Leapfrog needs two levels. prev is absent only before the first step; its
// fields correspond to the Robert-Asselin-filtered PV while psi/zeta keep the
// values inverted from the unfiltered PV (they feed only the lagged
// dissipation). Model time is carried as time0 + (step_index - step0) * dt so
// a restarted run reproduces the original bit for bit.
struct ModelState {
    ModelLevel curr;
    std::optional<ModelLevel> prev;
    double time0 = 0.0;
    long long step0 = 0;
    long long step_index = 0;
    std::array<double, 2> masses0 = {0.0, 0.0};

    double time(double dt) const {
        return time0 + static_cast<double>(step_index - step0) * dt;
    }
};

class QgModel {
public:
    explicit QgModel(const QgParams& p);

    const QgParams& params() const { return p_; }
    PvInverter& inverter() { return inv_; }

    ModelState initial_rest_state();

    // Builds a consistent state from PV alone; boundary PV is overwritten with
    // the diagnostic value implied by the inversion.
    ModelState state_from_pv(const std::array<Field, 3>& q, double time,
                             const std::array<double, 2>& masses0);

    // Advances one dt: forward Euler on the first step, then leapfrog with
    // lagged dissipation and the Robert-Asselin filter. Throws NumericError on
    // CFL violation (|u|max dt / h >= 0.5) or non-finite fields.
    void step(ModelState& s);

    double cfl_number(const ModelState& s) const;

    // Steps until t_end (rounded to whole steps), calling sink at the start
    // and then every snapshot_interval (also rounded to whole steps).
    void run(ModelState& s, double t_end, double snapshot_interval,
             const std::function<void(const ModelState&)>& sink);

private:
    QgParams p_;
    PvInverter inv_;
    Field forcing_, beta_y_;
    Field jac_, adv_[3], g_scratch_;
    std::array<Field, 3> qnew_;

    // Inverts lev.q, then fills psi, constants, interior and boundary zeta,
    // and diagnostic boundary PV.
    void complete_level(ModelLevel& lev, const std::array<double, 2>& masses0);
};

}  // namespace qgrom::qg
