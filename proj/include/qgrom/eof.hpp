#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qgrom/common.hpp"

namespace qgrom::eof {

// Orthonormal spatial patterns with per-mode variances, from the snapshot
// (Gram-matrix) method. eigenvalues are descending; total_variance is the
// full data variance (1/K) sum ||x_k - mean||^2, of which the retained modes
// carry sum(eigenvalues).
struct EofBasis {
    int nx = 0, ny = 0;
    int m = 0;
    bool mean_removed = false;
    double total_variance = 0.0;
    Eigen::VectorXd eigenvalues;  // m
    Eigen::VectorXd mean;         // n; zero vector when mean_removed=false
    Eigen::MatrixXd eofs;         // n x m

    int n() const { return nx * ny; }
    void validate() const;
};

// PC time series: column k of y holds the m-vector at times[k]. Times in days.
struct PcSeries {
    std::vector<double> times;
    Eigen::MatrixXd y;  // m x K

    int m() const { return static_cast<int>(y.rows()); }
    int K() const { return static_cast<int>(y.cols()); }
    void validate() const;  // uniform spacing, finite values
    double dt() const;      // sampling interval, days
};

// X holds one snapshot per column (n x K). Returns every mode whose variance
// exceeds 1e-12 of the leading one (zero modes have no defined pattern).
EofBasis compute_eof(const Eigen::MatrixXd& X, bool mean_removed, int nx, int ny);

// Smallest m with sum_{i<=m} lambda_i / sum lambda_i >= fraction.
int select_mode_count(const Eigen::VectorXd& eigenvalues, double fraction);

EofBasis truncate(const EofBasis& b, int m);

Eigen::VectorXd project_one(const EofBasis& b, const Eigen::VectorXd& x);

// Projects each column; result is m x K.
Eigen::MatrixXd project_series(const EofBasis& b, const Eigen::MatrixXd& X);

Eigen::VectorXd reconstruct(const EofBasis& b, const Eigen::VectorXd& z);

}  // namespace qgrom::eof
