// Acceptance gate: prints one PASS/FAIL line per criterion A1..A10 and exits
// nonzero if any fails. Heavier criteria share one desk-scale pipeline run.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qgrom/eof.hpp"
#include "qgrom/fieldops.hpp"
#include "qgrom/io/csv.hpp"
#include "qgrom/io/manifest.hpp"
#include "qgrom/nudge.hpp"
#include "qgrom/pipeline/config.hpp"
#include "qgrom/pipeline/stages.hpp"
#include "qgrom/qg/elliptic.hpp"
#include "qgrom/qg/jacobian.hpp"
#include "qgrom/qg/model.hpp"
#include "qgrom/sysid.hpp"

using namespace qgrom;
namespace fs = std::filesystem;

namespace {

bool g_any_fail = false;

void report(const std::string& id, bool pass, double seconds, const std::string& detail) {
    std::printf("%s %s (%.1fs) %s\n", id.c_str(), pass ? "PASS" : "FAIL", seconds,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) g_any_fail = true;
}

void run_criterion(const std::string& id, const std::function<std::pair<bool, std::string>()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = f();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, pass, s, detail);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

Field random_interior(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(n, n, 0.0);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) f(i, j) = u(rng);
    return f;
}

// A3 helper: single-harmonic streamfunction with per-layer offsets and its
// continuous PV, sampled on the grid.
struct Manufactured {
    std::array<Field, 3> psi, q;
    std::array<double, 2> masses0;
};

Manufactured manufactured_case(const qg::QgParams& p) {
    const int n = p.grid_n;
    const double h = p.h();
    const std::array<double, 3> A = {2.0e4, 1.2e4, 0.5e4};
    const std::array<double, 3> c = {3.0e3, -1.0e3, 0.0};
    const double kx = M_PI / p.L, ky = 2.0 * M_PI / p.L;
    const double lap_factor = -(kx * kx + ky * ky);
    Manufactured m;
    for (int l = 0; l < 3; ++l) {
        m.psi[l] = Field(n, n);
        m.q[l] = Field(n, n);
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double s = std::sin(kx * i * h) * std::sin(ky * j * h);
            for (int l = 0; l < 3; ++l) m.psi[l](i, j) = A[l] * s + c[l];
            for (int l = 0; l < 3; ++l) {
                double sp = 0.0;
                for (int k = 0; k < 3; ++k) sp += p.S(l, k) * m.psi[k](i, j);
                m.q[l](i, j) = lap_factor * A[l] * s - sp;
            }
        }
    }
    m.masses0 = qg::PvInverter::layer_pair_masses(m.psi, h);
    return m;
}

double inversion_error(const qg::QgParams& p, double* residual_rel) {
    const Manufactured m = manufactured_case(p);
    qg::PvInverter inv(p);
    std::array<Field, 3> psi;
    inv.invert(m.q, m.masses0, psi);
    double err = 0.0, scale = 0.0, qmax = 0.0;
    for (int l = 0; l < 3; ++l) {
        Field d = psi[l];
        d.add_scaled(-1.0, m.psi[l]);
        err = std::max(err, d.max_abs());
        scale = std::max(scale, m.psi[l].max_abs());
        qmax = std::max(qmax, m.q[l].max_abs());
    }
    *residual_rel = inv.residual_max(m.q, psi) / qmax;
    return err / scale;
}

// Lorenz-63 RK4 sampler for A6.
eof::PcSeries lorenz_series(double dt, int steps) {
    auto rhs = [](const Eigen::Vector3d& y) {
        return Eigen::Vector3d(10.0 * (y(1) - y(0)), y(0) * (28.0 - y(2)) - y(1),
                               y(0) * y(1) - 8.0 / 3.0 * y(2));
    };
    eof::PcSeries pcs;
    pcs.y.resize(3, steps + 1);
    pcs.times.resize(steps + 1);
    Eigen::Vector3d y(-8.0, 8.0, 27.0);
    for (int k = 0; k <= steps; ++k) {
        pcs.times[k] = k * dt;
        pcs.y.col(k) = y;
        const Eigen::Vector3d k1 = rhs(y);
        const Eigen::Vector3d k2 = rhs(y + 0.5 * dt * k1);
        const Eigen::Vector3d k3 = rhs(y + 0.5 * dt * k2);
        const Eigen::Vector3d k4 = rhs(y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return pcs;
}

sysid::RhsModel hand_model(int m, const Eigen::MatrixXd& coeffs) {
    sysid::RhsModel model;
    model.config.m = m;
    model.config.poly_degree = 1;
    model.config.fourier_mode = sysid::FourierMode::None;
    model.config.mid = Eigen::VectorXd::Zero(m);
    model.config.halfrange = Eigen::VectorXd::Ones(m);
    model.coeffs = coeffs;
    model.residual_norms = Eigen::VectorXd::Zero(m);
    return model;
}

double max_col_norm(const Eigen::MatrixXd& M) {
    double v = 0.0;
    for (Eigen::Index k = 0; k < M.cols(); ++k) v = std::max(v, M.col(k).norm());
    return v;
}

}  // namespace

int main() {
    // A1: stratification eigenvalues reproduce the two deformation radii.
    run_criterion("A1", []() -> std::pair<bool, std::string> {
        const qg::QgParams p = qg::QgParams::defaults(33);
        const qg::VerticalModes vm = p.vertical_modes();
        const double rd1 = 1.0 / std::sqrt(vm.lambda(1)) / 1000.0;
        const double rd2 = 1.0 / std::sqrt(vm.lambda(2)) / 1000.0;
        const double lmax = vm.lambda.cwiseAbs().maxCoeff();
        const bool pass = std::abs(vm.lambda(0)) <= 1e-2 * lmax &&
                          std::abs(rd1 - 40.0) <= 0.5 && std::abs(rd2 - 23.0) <= 0.5;
        return {pass, fmt("Rd = %.4f km, %.4f km (targets 40, 23 within 0.5)", rd1, rd2)};
    });

    // A2: Arakawa Jacobian conserves the three discrete integrals.
    run_criterion("A2", []() -> std::pair<bool, std::string> {
        const int n = 65;
        const double h = 3.84e6 / (n - 1);
        const Field f = random_interior(n, 11), g = random_interior(n, 23);
        Field jac(n, n);
        qg::arakawa_jacobian(f, g, h, jac);
        double sj = 0.0, sfj = 0.0, sgj = 0.0, aj = 0.0, afj = 0.0, agj = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const double v = jac(i, j);
                sj += v;
                aj += std::abs(v);
                sfj += f(i, j) * v;
                afj += std::abs(f(i, j) * v);
                sgj += g(i, j) * v;
                agj += std::abs(g(i, j) * v);
            }
        }
        const bool pass = std::abs(sj) <= 1e-12 * aj && std::abs(sfj) <= 1e-12 * afj &&
                          std::abs(sgj) <= 1e-12 * agj;
        return {pass, fmt("|sums|/scales = %.2e, %.2e, %.2e (<= 1e-12)", std::abs(sj) / aj,
                          std::abs(sfj) / afj, std::abs(sgj) / agj)};
    });

    // A3: elliptic inversion converges at second order with tiny residuals.
    run_criterion("A3", []() -> std::pair<bool, std::string> {
        double res65 = 0.0, res129 = 0.0;
        const double e65 = inversion_error(qg::QgParams::defaults(65), &res65);
        const double e129 = inversion_error(qg::QgParams::defaults(129), &res129);
        const double order = std::log2(e65 / e129);
        const bool pass = order >= 1.9 && res65 <= 1e-10 && res129 <= 1e-10;
        return {pass, fmt("order %.3f (>= 1.9), residuals %.2e / %.2e (<= 1e-10)", order,
                          res65, res129)};
    });

    // A4: layer-pair mass integrals survive 1000 steps.
    run_criterion("A4", []() -> std::pair<bool, std::string> {
        const qg::QgParams p = qg::QgParams::defaults(33);
        qg::QgModel model(p);
        qg::ModelState s = model.initial_rest_state();
        const std::array<double, 2> m0 = s.masses0;
        double drift = 0.0, psimax = 0.0;
        for (int k = 0; k < 1000; ++k) {
            model.step(s);
            if ((k + 1) % 100 == 0 || k == 999) {
                const auto m = qg::PvInverter::layer_pair_masses(s.curr.psi, p.h());
                drift = std::max(drift, std::abs(m[0] - m0[0]));
                drift = std::max(drift, std::abs(m[1] - m0[1]));
                for (int l = 0; l < 3; ++l) psimax = std::max(psimax, s.curr.psi[l].max_abs());
            }
        }
        const double scale = p.L * p.L * psimax;
        const bool pass = psimax > 0.0 && drift <= 1e-8 * scale;
        return {pass, fmt("max drift %.2e of scale %.2e (rel %.2e <= 1e-8)", drift, scale,
                          drift / scale)};
    });

    // A5: snapshot-method EOFs agree with the dense covariance eigensolve.
    run_criterion("A5", []() -> std::pair<bool, std::string> {
        const int nx = 10, ny = 5, n = nx * ny, K = 12;
        std::mt19937 rng(7);
        std::normal_distribution<double> g;
        Eigen::MatrixXd X(n, K);
        for (int c = 0; c < K; ++c)
            for (int r = 0; r < n; ++r) X(r, c) = g(rng);
        const eof::EofBasis b = eof::compute_eof(X, true, nx, ny);

        const Eigen::MatrixXd ortho =
            b.eofs.transpose() * b.eofs - Eigen::MatrixXd::Identity(b.m, b.m);
        const double ortho_err = ortho.cwiseAbs().maxCoeff();

        const Eigen::MatrixXd Xc = X.colwise() - X.rowwise().mean();
        const Eigen::MatrixXd C = Xc * Xc.transpose() / double(K);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
        double eig_err = 0.0;
        const double lmax = b.eigenvalues(0);
        for (int r = 0; r < b.m; ++r) {
            eig_err = std::max(eig_err,
                               std::abs(b.eigenvalues(r) - es.eigenvalues()(n - 1 - r)) / lmax);
        }

        double rt_err = 0.0;
        for (int c = 0; c < K; ++c) {
            const Eigen::VectorXd z = eof::project_one(b, X.col(c));
            const Eigen::VectorXd back = eof::reconstruct(b, z);
            rt_err = std::max(rt_err, (back - X.col(c)).norm() / Xc.col(c).norm());
        }
        const bool pass = ortho_err <= 1e-10 && rt_err <= 1e-10 && eig_err <= 1e-8;
        return {pass, fmt("ortho %.2e (<=1e-10), roundtrip %.2e (<=1e-10), eig %.2e (<=1e-8)",
                          ortho_err, rt_err, eig_err)};
    });

    // A6: feature regression recovers known dynamical systems.
    run_criterion("A6", []() -> std::pair<bool, std::string> {
        // Linear rotation with exact derivatives.
        const int K = 200;
        const double dt = 0.05;
        eof::PcSeries rot;
        rot.y.resize(2, K);
        rot.times.resize(K);
        Eigen::MatrixXd drot(2, K);
        for (int k = 0; k < K; ++k) {
            const double t = k * dt;
            rot.times[k] = t;
            rot.y(0, k) = std::sin(t);
            rot.y(1, k) = std::cos(t);
            drot(0, k) = std::cos(t);
            drot(1, k) = -std::sin(t);
        }
        sysid::FeatureConfig fc;
        fc.poly_degree = 1;
        fc.fourier_mode = sysid::FourierMode::None;
        const sysid::RhsModel mrot = sysid::fit(rot, drot, fc);
        Eigen::MatrixXd target(2, 3);
        target << 0, 0, 1, 0, -1, 0;
        const double rot_err = (mrot.coeffs - target).cwiseAbs().maxCoeff();

        // Lorenz-63 with second-order difference derivatives.
        const eof::PcSeries lor = lorenz_series(1e-3, 20000);
        const Eigen::MatrixXd dl = sysid::estimate_derivatives(lor);
        sysid::FeatureConfig fl;
        fl.poly_degree = 2;
        fl.fourier_mode = sysid::FourierMode::None;
        const sysid::RhsModel ml = sysid::fit(lor, dl, fl);
        // feature order: 1, y1, y2, y3, y1^2, y1y2, y1y3, y2^2, y2y3, y3^2
        Eigen::MatrixXd lt(3, 10);
        lt << 0, -10, 10, 0, 0, 0, 0, 0, 0, 0,
              0, 28, -1, 0, 0, 0, -1, 0, 0, 0,
              0, 0, 0, -8.0 / 3.0, 0, 1, 0, 0, 0, 0;
        double lor_err = 0.0;
        for (int r = 0; r < 3; ++r) {
            const double scale = lt.row(r).cwiseAbs().maxCoeff();
            lor_err = std::max(lor_err,
                               (ml.coeffs.row(r) - lt.row(r)).cwiseAbs().maxCoeff() / scale);
        }
        const bool pass = rot_err <= 1e-6 && lor_err <= 1e-3;
        return {pass, fmt("rotation %.2e (<=1e-6), Lorenz %.2e rel (<=1e-3)", rot_err, lor_err)};
    });

    // A7: nudging primitives against exact oracles.
    run_criterion("A7", []() -> std::pair<bool, std::string> {
        const bool eta_ok = nudge::update_eta(0.005, 2.0, 1.0, 0.001) == 0.006 &&
                            nudge::update_eta(0.005, 0.5, 1.0, 0.001) == 0.004 &&
                            nudge::update_eta(0.0005, 0.5, 1.0, 0.001) == 0.0;

        std::mt19937 rng(99);
        std::normal_distribution<double> g;
        const int m = 4, Kd = 500, N = 5, queries = 10000;
        Eigen::MatrixXd data(m, Kd);
        for (int c = 0; c < Kd; ++c)
            for (int r = 0; r < m; ++r) data(r, c) = g(rng);
        bool nn_ok = true;
        Eigen::VectorXd q(m);
        for (int t = 0; t < queries && nn_ok; ++t) {
            for (int r = 0; r < m; ++r) q(r) = g(rng);
            const std::vector<int> got = nudge::nearest_neighbors(q, data, N);
            std::vector<std::pair<double, int>> all(Kd);
            for (int c = 0; c < Kd; ++c) all[c] = {(data.col(c) - q).squaredNorm(), c};
            std::stable_sort(all.begin(), all.end());
            for (int k = 0; k < N; ++k) nn_ok = nn_ok && got[k] == all[k].second;
        }

        // eta == 0: Euler on the rotation system has the closed form
        // z1 + i z2 = (1 - i dt)^k (z1_0 + i z2_0).
        Eigen::MatrixXd coeffs(2, 3);
        coeffs << 0, 0, 1, 0, -1, 0;
        const sysid::RhsModel lin = hand_model(2, coeffs);
        eof::PcSeries train;
        train.times = {0.0, 1.0};
        train.y = Eigen::MatrixXd::Zero(2, 2);
        nudge::NudgeConfig nc;
        nc.N = 1;
        nc.eta_h = 0.0;
        nc.eta0 = 0.0;
        nc.dt = 0.02;
        nc.T = 10.0;
        nc.sigma_max = 0.0;
        const Eigen::VectorXd z0 = (Eigen::VectorXd(2) << 1.0, 0.0).finished();
        const nudge::RomTrajectory traj = nudge::integrate(lin, train, nc, z0);
        double euler_err = 0.0, zmax = 0.0;
        const std::complex<double> w0(1.0, 0.0), f(1.0, -nc.dt);
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const std::complex<double> w = w0 * std::pow(f, static_cast<double>(k));
            euler_err = std::max({euler_err, std::abs(traj.z(0, k) - w.real()),
                                  std::abs(traj.z(1, k) - w.imag())});
            zmax = std::max(zmax, traj.z.col(k).norm());
        }
        const bool euler_ok = euler_err <= 1e-12 * zmax;
        const bool pass = eta_ok && nn_ok && euler_ok;
        return {pass, fmt("branches %s, 1e4 neighbor queries %s, Euler dev %.2e (<=1e-12 rel)",
                          eta_ok ? "exact" : "WRONG", nn_ok ? "match" : "MISMATCH",
                          euler_err / zmax)};
    });

    // Desk-scale pipeline shared by A8 and A9.
    pipeline::PipelineConfig desk;
    desk.workdir = "acceptance_desk";
    double desk_seconds = 0.0;
    std::string desk_error;
    {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            pipeline::stage_all(desk, true);
        } catch (const std::exception& e) {
            desk_error = e.what();
        }
        desk_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    // A8: adaptive nudging keeps the trajectory inside 3x the training ball.
    run_criterion("A8", [&]() -> std::pair<bool, std::string> {
        if (!desk_error.empty()) return {false, "pipeline failed: " + desk_error};
        const auto traj = io::load_trajectory(desk.path(pipeline::artifact::traj));
        const auto train = io::load_pcs(desk.path(pipeline::artifact::train_pcs));
        const double zmax = max_col_norm(traj.z);
        const double ymax = max_col_norm(train.y);
        bool eta_ok = true;
        for (const double e : traj.eta) eta_ok = eta_ok && e >= 0.0;
        const bool full = !traj.aborted_at.has_value();
        const auto unn = io::load_trajectory(desk.path(pipeline::artifact::traj_unnudged));
        const double zmax_unn = max_col_norm(unn.z);
        const bool pass = full && eta_ok && zmax <= 3.0 * ymax;
        return {pass,
                fmt("max|z| %.3g vs 3*max|y| %.3g, eta>=0 %s, full horizon %s "
                    "(unnudged max|z| %.3g%s)",
                    zmax, 3.0 * ymax, eta_ok ? "yes" : "NO", full ? "yes" : "NO", zmax_unn,
                    unn.aborted_at ? ", aborted early" : "")};
    });

    // A9: reduced model beats the coarse run and keeps the phase-distance level.
    run_criterion("A9", [&]() -> std::pair<bool, std::string> {
        if (!desk_error.empty()) return {false, "pipeline failed: " + desk_error};
        const nlohmann::json m = io::load_manifest(desk.workdir + "/manifest_diagnose.json");
        const double d_rom = m.at("dist_mean_ref_rom").get<double>();
        const double d_low = m.at("dist_mean_ref_lowres").get<double>();
        const double p_ref = m.at("mean_phase_ref").get<double>();
        const double p_rom = m.at("mean_phase_rom").get<double>();
        const bool order_ok = d_rom < d_low;
        const bool phase_ok = std::abs(p_rom - p_ref) <= 0.25 * p_ref;
        const bool time_ok = desk_seconds <= 1800.0;
        const bool pass = order_ok && phase_ok && time_ok;
        return {pass,
                fmt("D(ref,rom) %.4g < D(ref,low) %.4g: %s; phase rom/ref %.4g/%.4g "
                    "(|diff| <= 25%%): %s; pipeline %.0fs (<= 1800)",
                    d_rom, d_low, order_ok ? "yes" : "NO", p_rom, p_ref,
                    phase_ok ? "yes" : "NO", desk_seconds)};
    });

    // A10: the whole pipeline is bit-reproducible.
    run_criterion("A10", []() -> std::pair<bool, std::string> {
        pipeline::PipelineConfig c;
        c.high_n = 17;
        c.low_n = 9;
        c.spinup_years = 0.05;
        c.run_years = 0.1;
        c.train_years = 0.05;
        c.snapshot_interval_days = 2.0;
        auto run_into = [&](const std::string& ws) {
            pipeline::PipelineConfig cc = c;
            cc.workdir = ws;
            pipeline::stage_all(cc, true);
        };
        run_into("acceptance_det_a");
        run_into("acceptance_det_b");
        auto bytes = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        int files = 0;
        std::string first_diff;
        for (const auto& e : fs::recursive_directory_iterator("acceptance_det_a")) {
            if (!e.is_regular_file()) continue;
            ++files;
            const fs::path rel = fs::relative(e.path(), "acceptance_det_a");
            const fs::path other = fs::path("acceptance_det_b") / rel;
            if (!fs::exists(other) || bytes(e.path()) != bytes(other)) {
                if (first_diff.empty()) first_diff = rel.string();
            }
        }
        const bool pass = files > 0 && first_diff.empty();
        return {pass, first_diff.empty()
                          ? fmt("%d artifact files byte-identical across reruns", files)
                          : "first differing file: " + first_diff};
    });

    return g_any_fail ? 1 : 0;
}
