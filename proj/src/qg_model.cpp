#include "qgrom/qg/model.hpp"

#include <cmath>
#include <string>

#include "qgrom/qg/boundary.hpp"
#include "qgrom/qg/forcing.hpp"
#include "qgrom/qg/jacobian.hpp"

namespace qgrom::qg {

QgModel::QgModel(const QgParams& p) : p_(p), inv_(p) {
    p_.validate();
    forcing_ = forcing_field(p_);
    const int n = p_.grid_n;
    beta_y_ = Field(n, n);
    for (int j = 0; j < n; ++j) {
        const double by = p_.beta * j * p_.h();
        for (int i = 0; i < n; ++i) beta_y_(i, j) = by;
    }
    jac_ = Field(n, n);
    g_scratch_ = Field(n, n);
    for (int l = 0; l < 3; ++l) {
        adv_[l] = Field(n, n);
        qnew_[l] = Field(n, n);
    }
}

void QgModel::complete_level(ModelLevel& lev, const std::array<double, 2>& masses0) {
    const int n = p_.grid_n;
    lev.constants = inv_.invert(lev.q, masses0, lev.psi);
    for (int l = 0; l < 3; ++l) {
        if (!lev.zeta[l].same_shape(lev.q[l])) lev.zeta[l] = Field(n, n);
        // zeta = lap(psi) = q + S psi on the interior.
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                lev.zeta[l](i, j) = lev.q[l](i, j) + p_.S(l, 0) * lev.psi[0](i, j) +
                                    p_.S(l, 1) * lev.psi[1](i, j) +
                                    p_.S(l, 2) * lev.psi[2](i, j);
            }
        }
        apply_boundary_vorticity(lev.psi[l], p_.alpha, p_.h(), lev.zeta[l]);
    }
    // Diagnostic boundary PV: q = zeta - S psi with psi at its boundary constants.
    for (int l = 0; l < 3; ++l) {
        const double sp = p_.S(l, 0) * lev.constants(0) + p_.S(l, 1) * lev.constants(1) +
                          p_.S(l, 2) * lev.constants(2);
        Field& q = lev.q[l];
        const Field& z = lev.zeta[l];
        for (int i = 0; i < n; ++i) {
            q(i, 0) = z(i, 0) - sp;
            q(i, n - 1) = z(i, n - 1) - sp;
            q(0, i) = z(0, i) - sp;
            q(n - 1, i) = z(n - 1, i) - sp;
        }
    }
}

ModelState QgModel::initial_rest_state() {
    ModelState s;
    const int n = p_.grid_n;
    for (int l = 0; l < 3; ++l) {
        s.curr.q[l] = Field(n, n);
        s.curr.psi[l] = Field(n, n);
        s.curr.zeta[l] = Field(n, n);
    }
    s.masses0 = {0.0, 0.0};
    return s;
}

ModelState QgModel::state_from_pv(const std::array<Field, 3>& q, double time,
                                  const std::array<double, 2>& masses0) {
    ModelState s;
    s.curr.q = q;
    s.time0 = time;
    s.masses0 = masses0;
    complete_level(s.curr, masses0);
    return s;
}

double QgModel::cfl_number(const ModelState& s) const {
    const int n = p_.grid_n;
    const double inv2h = 1.0 / (2.0 * p_.h());
    double vmax = 0.0;
    for (int l = 0; l < 3; ++l) {
        const Field& psi = s.curr.psi[l];
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                const double u = -(psi(i, j + 1) - psi(i, j - 1)) * inv2h;
                const double v = (psi(i + 1, j) - psi(i - 1, j)) * inv2h;
                vmax = std::max(vmax, std::max(std::abs(u), std::abs(v)));
            }
        }
    }
    return vmax * p_.dt / p_.h();
}

void QgModel::step(ModelState& s) {
    const int n = p_.grid_n;
    const double dt = p_.dt;
    const double cfl = cfl_number(s);
    if (!(cfl < 0.5)) {
        throw NumericError("CFL violation at step " + std::to_string(s.step_index) + " (t = " +
                           std::to_string(s.time(dt) / 86400.0) + " days): |u|max*dt/h = " +
                           std::to_string(cfl) + ", max|q1| = " +
                           std::to_string(s.curr.q[0].max_abs()));
    }

    const bool leap = s.prev.has_value();
    const ModelLevel& lag = leap ? *s.prev : s.curr;

    for (int l = 0; l < 3; ++l) {
        // g = q + beta y, boundary ring included (diagnostic PV there).
        const Field& q = s.curr.q[l];
        for (std::size_t k = 0; k < g_scratch_.size(); ++k) {
            g_scratch_.data()[k] = q.data()[k] + beta_y_.data()[k];
        }
        arakawa_jacobian(s.curr.psi[l], g_scratch_, p_.h(), jac_);

        Field& adv = adv_[l];
        const Field& zl = lag.zeta[l];
        const double ih2 = 1.0 / (p_.h() * p_.h());
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                double t = -jac_(i, j);
                if (l == 0) t += forcing_(i, j);
                const double lapz = (zl(i + 1, j) + zl(i - 1, j) + zl(i, j + 1) +
                                     zl(i, j - 1) - 4.0 * zl(i, j)) * ih2;
                t += p_.nu * lapz;
                if (l == 2) t -= p_.mu * zl(i, j);
                adv(i, j) = t;
            }
        }
    }

    const double fac = leap ? 2.0 * dt : dt;
    const std::array<Field, 3>& base = leap ? s.prev->q : s.curr.q;
    for (int l = 0; l < 3; ++l) {
        Field& qn = qnew_[l];
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                qn(i, j) = base[l](i, j) + fac * adv_[l](i, j);
            }
        }
    }

    ModelLevel next;
    next.q = qnew_;
    complete_level(next, s.masses0);

    if (leap && p_.ra_filter > 0.0) {
        const double r = p_.ra_filter;
        for (int l = 0; l < 3; ++l) {
            Field& qc = s.curr.q[l];
            const Field& qp = s.prev->q[l];
            const Field& qn = next.q[l];
            for (int j = 1; j < n - 1; ++j) {
                for (int i = 1; i < n - 1; ++i) {
                    qc(i, j) += r * (qn(i, j) - 2.0 * qc(i, j) + qp(i, j));
                }
            }
        }
    }

    s.prev = std::move(s.curr);
    s.curr = std::move(next);
    s.step_index += 1;
}

void QgModel::run(ModelState& s, double t_end, double snapshot_interval,
                  const std::function<void(const ModelState&)>& sink) {
    const double dt = p_.dt;
    const double t0 = s.time(dt);
    if (t_end < t0) throw DomainError("QgModel::run: t_end precedes the state time");
    if (snapshot_interval < dt) {
        throw DomainError("QgModel::run: snapshot interval shorter than dt");
    }
    const long long n_steps = std::llround((t_end - t0) / dt);
    const long long every = std::max<long long>(1, std::llround(snapshot_interval / dt));

    if (sink) sink(s);
    for (long long k = 1; k <= n_steps; ++k) {
        step(s);
        if (sink && k % every == 0) sink(s);
    }
    if (!s.curr.q[0].all_finite()) {
        throw NumericError("QgModel::run: non-finite PV at step " +
                           std::to_string(s.step_index));
    }
}

}  // namespace qgrom::qg
