#include "qgrom/nudge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qgrom::nudge {

void NudgeConfig::validate() const {
    if (N < 1) throw DomainError("NudgeConfig: N must be at least 1");
    if (eta_h < 0.0) throw DomainError("NudgeConfig: eta_h must be non-negative");
    if (eta0 < 0.0) throw DomainError("NudgeConfig: eta0 must be non-negative");
    if (dt <= 0.0) throw DomainError("NudgeConfig: dt must be positive");
    if (substeps < 1) throw DomainError("NudgeConfig: substeps must be at least 1");
    if (T <= 0.0) throw DomainError("NudgeConfig: horizon must be positive");
    if (sigma_max < 0.0) throw DomainError("NudgeConfig: sigma_max must be non-negative");
    if (stat == SigmaStat::Window && window < 1) {
        throw DomainError("NudgeConfig: window statistic needs window >= 1");
    }
}

void RomTrajectory::validate() const {
    const std::size_t n = times.size();
    if (eta.size() != n || sigma.size() != n ||
        static_cast<std::size_t>(z.cols()) != n) {
        throw ShapeError("RomTrajectory: history lengths disagree");
    }
    for (double e : eta) {
        if (e < 0.0) throw DomainError("RomTrajectory: negative eta");
    }
    if (n >= 2) {
        const double d = times[1] - times[0];
        for (std::size_t k = 2; k < n; ++k) {
            if (std::abs((times[k] - times[k - 1]) - d) > 1e-9 * std::abs(d)) {
                throw DomainError("RomTrajectory: non-uniform times");
            }
        }
    }
}

std::vector<int> nearest_neighbors(const Eigen::VectorXd& point, const Eigen::MatrixXd& data,
                                   int N) {
    const int K = static_cast<int>(data.cols());
    if (N < 1) throw DomainError("nearest_neighbors: N must be at least 1");
    if (K < N) {
        throw DomainError("nearest_neighbors: dataset holds " + std::to_string(K) +
                          " points, need " + std::to_string(N));
    }
    if (point.size() != data.rows()) throw ShapeError("nearest_neighbors: dimension mismatch");

    // Partial selection keeps the scan O(K N): best holds (distance^2, index)
    // sorted ascending with the tie-break on index.
    std::vector<std::pair<double, int>> best;
    best.reserve(N + 1);
    for (int k = 0; k < K; ++k) {
        const double d2 = (data.col(k) - point).squaredNorm();
        if (static_cast<int>(best.size()) == N && d2 >= best.back().first) continue;
        const std::pair<double, int> cand{d2, k};
        auto it = std::lower_bound(best.begin(), best.end(), cand);
        best.insert(it, cand);
        if (static_cast<int>(best.size()) > N) best.pop_back();
    }
    std::vector<int> idx(N);
    for (int i = 0; i < N; ++i) idx[i] = best[i].second;
    return idx;
}

Eigen::VectorXd neighborhood_mean(const std::vector<int>& idx, const Eigen::MatrixXd& data) {
    if (idx.empty()) throw DomainError("neighborhood_mean: empty index set");
    Eigen::VectorXd m = Eigen::VectorXd::Zero(data.rows());
    for (int k : idx) {
        if (k < 0 || k >= data.cols()) throw DomainError("neighborhood_mean: index out of range");
        m += data.col(k);
    }
    return m / static_cast<double>(idx.size());
}

double component_std(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw DomainError("component_std: empty vector");
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

double update_eta(double eta_prev, double sigma_z, double sigma_max, double eta_h) {
    if (sigma_z > sigma_max) return eta_prev + eta_h;
    const double down = eta_prev - eta_h;
    return down < 0.0 ? 0.0 : down;
}

double sigma_max_from_training(const Eigen::MatrixXd& Y, SigmaStat stat, int window) {
    const int K = static_cast<int>(Y.cols());
    if (K < 1) throw DomainError("sigma_max_from_training: empty training set");
    double mx = 0.0;
    if (stat == SigmaStat::Instant) {
        for (int k = 0; k < K; ++k) mx = std::max(mx, component_std(Y.col(k)));
        return mx;
    }
    if (window < 1) throw DomainError("sigma_max_from_training: window must be >= 1");
    for (int k = 0; k < K; ++k) {
        const int lo = std::max(0, k - window + 1);
        const int w = k - lo + 1;
        Eigen::Map<const Eigen::VectorXd> pooled(Y.col(lo).data(),
                                                 static_cast<Eigen::Index>(w) * Y.rows());
        mx = std::max(mx, component_std(pooled));
    }
    return mx;
}

namespace {
double sigma_of_state(const NudgeConfig& cfg, const Eigen::MatrixXd& z, int i) {
    if (cfg.stat == SigmaStat::Instant) return component_std(z.col(i));
    const int lo = std::max(0, i - cfg.window + 1);
    const int w = i - lo + 1;
    Eigen::Map<const Eigen::VectorXd> pooled(z.col(lo).data(),
                                             static_cast<Eigen::Index>(w) * z.rows());
    return component_std(pooled);
}
}  // namespace

RomTrajectory integrate(const sysid::RhsModel& model, const eof::PcSeries& training,
                        const NudgeConfig& cfg, const Eigen::VectorXd& z0,
                        DivergencePolicy policy) {
    cfg.validate();
    const int m = static_cast<int>(z0.size());
    if (training.K() == 0) throw DomainError("integrate: empty training set");
    if (training.m() != m) throw ShapeError("integrate: training dimension mismatch");
    if (model.config.m != m) throw ShapeError("integrate: model dimension mismatch");

    // States, sigma, and eta live at the dt cadence of the training data;
    // substeps only refine the Euler flow map between two recorded states,
    // with eta frozen across the refinement.
    const double h = cfg.dt / cfg.substeps;
    const long long n_steps = std::llround(cfg.T / cfg.dt);
    const double t0 = training.times.empty() ? 0.0 : training.times.front();

    RomTrajectory traj;
    traj.times.resize(n_steps + 1);
    traj.z.resize(m, n_steps + 1);
    traj.eta.resize(n_steps + 1);
    traj.sigma.resize(n_steps + 1);

    Eigen::VectorXd z = z0;
    long long recorded = 0;
    double eta = cfg.eta0;
    for (long long i = 0; i <= n_steps; ++i) {
        traj.times[i] = t0 + static_cast<double>(i) * cfg.dt;
        traj.z.col(i) = z;
        if (!z.allFinite()) {
            if (policy == DivergencePolicy::Throw) {
                throw NumericError("integrate: non-finite state at step " + std::to_string(i) +
                                   " (t = " + std::to_string(traj.times[i]) + " days)");
            }
            traj.aborted_at = i;
            recorded = i;  // drop the non-finite state itself
            break;
        }
        const double sig = sigma_of_state(cfg, traj.z, static_cast<int>(i));
        if (i > 0) eta = update_eta(eta, sig, cfg.sigma_max, cfg.eta_h);
        traj.sigma[i] = sig;
        traj.eta[i] = eta;
        recorded = i + 1;
        if (i == n_steps) break;

        for (int s = 0; s < cfg.substeps; ++s) {
            Eigen::VectorXd rhs =
                sysid::eval_rhs(model, z, traj.times[i] + static_cast<double>(s) * h);
            if (eta != 0.0 || cfg.eta_h != 0.0) {
                const auto nn = nearest_neighbors(z, training.y, cfg.N);
                rhs += eta * (neighborhood_mean(nn, training.y) - z);
            }
            z += h * rhs;
        }
    }

    traj.times.resize(recorded);
    traj.eta.resize(recorded);
    traj.sigma.resize(recorded);
    traj.z.conservativeResize(m, recorded);
    traj.validate();
    return traj;
}

}  // namespace qgrom::nudge
