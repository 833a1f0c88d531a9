#include <cmath>
#include <numbers>
#include <string>

#include "qgrom/sysid.hpp"

namespace qgrom::sysid {

int FeatureConfig::n_poly() const {
    int n = 1 + m;
    if (poly_degree >= 2) n += m * (m + 1) / 2;
    if (poly_degree >= 3) n += m * (m + 1) * (m + 2) / 6;
    return n;
}

int FeatureConfig::n_features() const {
    int n = n_poly();
    if (fourier_mode == FourierMode::State) n += 2 * harmonics * m;
    if (fourier_mode == FourierMode::Time) n += 2 * static_cast<int>(harmonic_set.size());
    return n;
}

void FeatureConfig::validate() const {
    if (m < 1) throw DomainError("FeatureConfig: state dimension must be positive");
    if (poly_degree < 1 || poly_degree > 3) {
        throw ConfigError("FeatureConfig: poly_degree must be 1, 2 or 3");
    }
    if (harmonics < 0) throw ConfigError("FeatureConfig: harmonics must be non-negative");
    if (rcond <= 0.0 || rcond >= 1.0) throw ConfigError("FeatureConfig: rcond out of (0,1)");
    if (ridge < 0.0) throw ConfigError("FeatureConfig: ridge must be non-negative");
    if (fourier_mode == FourierMode::Time && base_period <= 0.0) {
        throw ConfigError("FeatureConfig: time mode needs a positive base period");
    }
    if (mid.size() != m || halfrange.size() != m) {
        throw ShapeError("FeatureConfig: normalization vectors not sized to m");
    }
    for (int i = 0; i < m; ++i) {
        if (!(halfrange(i) > 0.0)) {
            throw DomainError("FeatureConfig: halfrange must be positive (component " +
                              std::to_string(i) + ")");
        }
    }
}

void build_features(const FeatureConfig& cfg, const Eigen::VectorXd& y, double t,
                    Eigen::VectorXd& out, bool* extrapolated) {
    const int m = cfg.m;
    if (y.size() != m) throw ShapeError("build_features: state vector has wrong length");
    if (out.size() != cfg.n_features()) out.resize(cfg.n_features());

    int p = 0;
    out(p++) = 1.0;
    for (int i = 0; i < m; ++i) out(p++) = y(i);
    if (cfg.poly_degree >= 2) {
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) out(p++) = y(i) * y(j);
        }
    }
    if (cfg.poly_degree >= 3) {
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                for (int k = j; k < m; ++k) out(p++) = y(i) * y(j) * y(k);
            }
        }
    }

    if (extrapolated) *extrapolated = false;
    if (cfg.fourier_mode == FourierMode::State && cfg.harmonics > 0) {
        for (int i = 0; i < m; ++i) {
            const double yh = std::numbers::pi * (y(i) - cfg.mid(i)) / cfg.halfrange(i);
            if (extrapolated && std::abs(y(i) - cfg.mid(i)) > 10.0 * cfg.halfrange(i)) {
                *extrapolated = true;
            }
            // Recurrence keeps the block at O(K) trig-free updates per component.
            const double s1 = std::sin(yh), c1 = std::cos(yh);
            double sk = s1, ck = c1;
            out(p++) = sk;
            out(p++) = ck;
            for (int k = 2; k <= cfg.harmonics; ++k) {
                const double s = sk * c1 + ck * s1;
                const double c = ck * c1 - sk * s1;
                sk = s;
                ck = c;
                out(p++) = sk;
                out(p++) = ck;
            }
        }
    } else if (cfg.fourier_mode == FourierMode::Time) {
        for (int k : cfg.harmonic_set) {
            const double w = 2.0 * std::numbers::pi * k * t / cfg.base_period;
            out(p++) = std::sin(w);
            out(p++) = std::cos(w);
        }
    }
}

Eigen::MatrixXd estimate_derivatives(const eof::PcSeries& pcs) {
    pcs.validate();
    const int K = pcs.K();
    if (K < 3) throw DomainError("estimate_derivatives: need at least 3 samples");
    const double dt = pcs.dt();
    const Eigen::MatrixXd& y = pcs.y;
    Eigen::MatrixXd d(y.rows(), K);
    d.col(0) = (-3.0 * y.col(0) + 4.0 * y.col(1) - y.col(2)) / (2.0 * dt);
    for (int k = 1; k < K - 1; ++k) {
        d.col(k) = (y.col(k + 1) - y.col(k - 1)) / (2.0 * dt);
    }
    d.col(K - 1) = (3.0 * y.col(K - 1) - 4.0 * y.col(K - 2) + y.col(K - 3)) / (2.0 * dt);
    return d;
}

}  // namespace qgrom::sysid
