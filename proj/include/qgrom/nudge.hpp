#pragma once

#include <optional>

#include "qgrom/sysid.hpp"

namespace qgrom::nudge {

enum class SigmaStat { Instant, Window };

// All times in days, matching PcSeries. eta_h = 0 disables the schedule
// (plain reduced-model integration).
struct NudgeConfig {
    int N = 5;
    double eta_h = 1e-3;
    double eta0 = 0.0;
    double dt = 1.0;        // recording and eta-update step, days
    int substeps = 1;       // Euler refinement of the flow map between records
    double T = 0.0;         // horizon, days
    double sigma_max = 0.0;
    SigmaStat stat = SigmaStat::Instant;
    int window = 0;         // trailing states pooled when stat == Window

    void validate() const;
};

enum class DivergencePolicy { Throw, Truncate };

struct RomTrajectory {
    std::vector<double> times;  // days
    Eigen::MatrixXd z;          // m x (n_states)
    std::vector<double> eta, sigma;
    std::optional<long long> aborted_at;  // step index of first non-finite state

    void validate() const;  // eta >= 0, uniform times
};

// Indices of the N smallest Euclidean distances in the dataset columns;
// ties broken by the smaller time index. Exhaustive scan.
std::vector<int> nearest_neighbors(const Eigen::VectorXd& point, const Eigen::MatrixXd& data,
                                   int N);

Eigen::VectorXd neighborhood_mean(const std::vector<int>& idx, const Eigen::MatrixXd& data);

// Population standard deviation over the components of one state vector.
double component_std(const Eigen::VectorXd& v);

// sigma_z > sigma_max raises eta by eta_h; otherwise lowers it, clamped at 0
// (the clamp wins when the decrement would go negative).
double update_eta(double eta_prev, double sigma_z, double sigma_max, double eta_h);

// Threshold for the schedule: max over training instants of the per-instant
// statistic (component_std, or the pooled trailing-window std).
double sigma_max_from_training(const Eigen::MatrixXd& Y, SigmaStat stat, int window);

// Forward Euler on z' = rhs(z,t) + eta (nbr_mean(z) - z). States, sigma, and
// eta live at the dt cadence: eta is updated from sigma(z) before each
// recorded step (eta(t0) = eta0) and frozen across the substeps refining the
// flow map in between.
RomTrajectory integrate(const sysid::RhsModel& model, const eof::PcSeries& training,
                        const NudgeConfig& cfg, const Eigen::VectorXd& z0,
                        DivergencePolicy policy = DivergencePolicy::Throw);

}  // namespace qgrom::nudge
