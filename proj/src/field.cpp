#include "qgrom/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qgrom {

Field::Field(int nx, int ny, double fill)
    : nx_(nx), ny_(ny), d_(static_cast<std::size_t>(nx) * ny, fill) {
    if (nx < 1 || ny < 1) {
        throw DomainError("Field: dimensions must be positive, got " + std::to_string(nx) +
                          "x" + std::to_string(ny));
    }
}

void Field::fill(double v) { std::fill(d_.begin(), d_.end(), v); }

double Field::integral(double h) const {
    double s = 0.0;
    for (int j = 0; j < ny_; ++j) {
        const double wy = (j == 0 || j == ny_ - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i < nx_; ++i) {
            const double wx = (i == 0 || i == nx_ - 1) ? 0.5 : 1.0;
            row += wx * (*this)(i, j);
        }
        s += wy * row;
    }
    return s * h * h;
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, std::abs(v));
    return m;
}

bool Field::all_finite() const {
    for (double v : d_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void Field::add_scaled(double a, const Field& x) {
    require_same_shape(*this, x, "Field::add_scaled");
    for (std::size_t k = 0; k < d_.size(); ++k) d_[k] += a * x.d_[k];
}

void require_same_shape(const Field& a, const Field& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(a.nx()) +
                         "x" + std::to_string(a.ny()) + " vs " + std::to_string(b.nx()) +
                         "x" + std::to_string(b.ny()));
    }
}

}  // namespace qgrom
