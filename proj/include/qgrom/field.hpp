#pragma once

#include <cstddef>
#include <vector>

#include "qgrom/common.hpp"

namespace qgrom {

// Scalar field on a square nx-by-ny grid. Storage is row-major in y:
// d[j*nx + i] holds the value at (x_i, y_j), so a "row" is a constant-y
// line scanned in x. (0,0) is the southwest corner.
class Field {
public:
    Field() = default;
    Field(int nx, int ny, double fill = 0.0);

    double& operator()(int i, int j) { return d_[static_cast<std::size_t>(j) * nx_ + i]; }
    double operator()(int i, int j) const { return d_[static_cast<std::size_t>(j) * nx_ + i]; }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return d_.size(); }

    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }

    void fill(double v);
    bool same_shape(const Field& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }

    // Trapezoid quadrature: sum of w_ij * f_ij * h^2 with w = 1 interior,
    // 1/2 edges, 1/4 corners.
    double integral(double h) const;

    double max_abs() const;
    bool all_finite() const;

    // In-place axpy: this += a * x.
    void add_scaled(double a, const Field& x);

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> d_;
};

void require_same_shape(const Field& a, const Field& b, const char* what);

}  // namespace qgrom
