#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qgrom/eof.hpp"

namespace qgrom::sysid {

enum class FourierMode { None, State, Time };

// Feature library: constant, linear, upper-triangular quadratic monomials
// (cubic when poly_degree=3), then the trigonometric block. In state mode the
// block is sin(k yhat_i), cos(k yhat_i) per component i (outer) per harmonic
// k=1..K (inner), with yhat_i = pi (y_i - mid_i) / halfrange_i from the
// training range. In time mode it is sin/cos(2 pi k t / base_period) for the
// retained harmonic set. The ordering is fixed; model files depend on it.
struct FeatureConfig {
    int m = 0;
    int poly_degree = 2;
    FourierMode fourier_mode = FourierMode::State;
    int harmonics = 50;               // K
    Eigen::VectorXd mid, halfrange;   // per component, set by fit()
    double base_period = 0.0;         // days, time mode only
    std::vector<int> harmonic_set;    // set by fit(); 1..K in state mode
    double rcond = 1e-10;
    double ridge = 0.0;

    int n_poly() const;
    int n_features() const;
    void validate() const;
};

struct RhsModel {
    FeatureConfig config;
    Eigen::MatrixXd coeffs;          // m x n_features
    Eigen::VectorXd residual_norms;  // per component, on the training set
};

// out must have size config.n_features(). extrapolated (optional) is set when
// any |y_i - mid_i| exceeds 10 halfranges — a warning, not an error.
void build_features(const FeatureConfig& cfg, const Eigen::VectorXd& y, double t,
                    Eigen::VectorXd& out, bool* extrapolated = nullptr);

// Second-order differences: central inside, one-sided at the endpoints.
// Exact for polynomials of degree <= 2. Units: PC units per day.
Eigen::MatrixXd estimate_derivatives(const eof::PcSeries& pcs);

// Minimum-norm least squares for Theta C = Y (Theta: K x F, Y: K x m) via SVD
// with relative cutoff rcond; ridge > 0 switches to the regularized normal
// equations (dual form when F > K).
Eigen::MatrixXd lstsq_minnorm(const Eigen::MatrixXd& Theta, const Eigen::MatrixXd& Y,
                              double rcond, double ridge);

// Fills mid/halfrange from the training range, selects harmonics (all of 1..K
// in state mode; the K largest-amplitude residual harmonics after a
// polynomial-only prefit in time mode), and solves for the coefficients.
RhsModel fit(const eof::PcSeries& pcs, const Eigen::MatrixXd& derivs, FeatureConfig cfg);

Eigen::VectorXd eval_rhs(const RhsModel& model, const Eigen::VectorXd& y, double t);

}  // namespace qgrom::sysid
