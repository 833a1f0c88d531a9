#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qgrom/sysid.hpp"

namespace qgrom::sysid {

Eigen::MatrixXd lstsq_minnorm(const Eigen::MatrixXd& Theta, const Eigen::MatrixXd& Y,
                              double rcond, double ridge) {
    if (Theta.rows() != Y.rows()) throw ShapeError("lstsq_minnorm: row count mismatch");
    if (!Theta.allFinite() || !Y.allFinite()) {
        throw NumericError("lstsq_minnorm: non-finite inputs");
    }
    if (ridge > 0.0) {
        const Eigen::Index K = Theta.rows(), F = Theta.cols();
        if (F <= K) {
            Eigen::MatrixXd A = Theta.transpose() * Theta;
            A.diagonal().array() += ridge;
            return A.ldlt().solve(Theta.transpose() * Y);
        }
        Eigen::MatrixXd A = Theta * Theta.transpose();
        A.diagonal().array() += ridge;
        return Theta.transpose() * A.ldlt().solve(Y);
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = rcond * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::MatrixXd UtY = svd.matrixU().transpose() * Y;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        UtY.row(i) *= (sv(i) > cut) ? 1.0 / sv(i) : 0.0;
    }
    return svd.matrixV() * UtY;
}

namespace {

Eigen::MatrixXd feature_matrix(const FeatureConfig& cfg, const eof::PcSeries& pcs) {
    const int K = pcs.K();
    Eigen::MatrixXd Theta(K, cfg.n_features());
    Eigen::VectorXd row(cfg.n_features());
    for (int k = 0; k < K; ++k) {
        build_features(cfg, pcs.y.col(k), pcs.times[k], row);
        Theta.row(k) = row;
    }
    return Theta;
}

// Residual harmonic amplitudes against the base period, summed over
// components; the paper-count largest win, ties to the smaller index.
std::vector<int> pick_time_harmonics(const Eigen::MatrixXd& residual,  // K x m
                                     const std::vector<double>& times, double base_period,
                                     int count) {
    const int K = static_cast<int>(times.size());
    const int kmax = std::max(1, (K - 1) / 2);
    std::vector<std::pair<double, int>> amp;
    amp.reserve(kmax);
    for (int k = 1; k <= kmax; ++k) {
        double a = 0.0;
        for (Eigen::Index c = 0; c < residual.cols(); ++c) {
            std::complex<double> z(0.0, 0.0);
            for (int j = 0; j < K; ++j) {
                const double w = -2.0 * std::numbers::pi * k * times[j] / base_period;
                z += residual(j, c) * std::complex<double>(std::cos(w), std::sin(w));
            }
            a += std::norm(z);
        }
        amp.emplace_back(a, k);
    }
    std::sort(amp.begin(), amp.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    std::vector<int> picked;
    for (int i = 0; i < std::min<int>(count, static_cast<int>(amp.size())); ++i) {
        picked.push_back(amp[i].second);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

RhsModel fit(const eof::PcSeries& pcs, const Eigen::MatrixXd& derivs, FeatureConfig cfg) {
    pcs.validate();
    const int m = pcs.m();
    const int K = pcs.K();
    if (K < 2) throw DomainError("fit: need at least 2 samples");
    if (derivs.rows() != m || derivs.cols() != K) {
        throw ShapeError("fit: derivative series not aligned with the PC series");
    }
    if (!derivs.allFinite()) throw NumericError("fit: non-finite derivatives");

    cfg.m = m;
    cfg.mid.resize(m);
    cfg.halfrange.resize(m);
    for (int i = 0; i < m; ++i) {
        const double lo = pcs.y.row(i).minCoeff();
        const double hi = pcs.y.row(i).maxCoeff();
        cfg.mid(i) = 0.5 * (lo + hi);
        const double hr = 0.5 * (hi - lo);
        cfg.halfrange(i) = hr > 0.0 ? hr : 1.0;
    }

    const Eigen::MatrixXd Y = derivs.transpose();  // K x m

    if (cfg.fourier_mode == FourierMode::State) {
        cfg.harmonic_set.resize(cfg.harmonics);
        for (int k = 1; k <= cfg.harmonics; ++k) cfg.harmonic_set[k - 1] = k;
    } else if (cfg.fourier_mode == FourierMode::Time) {
        FeatureConfig poly = cfg;
        poly.fourier_mode = FourierMode::None;
        poly.harmonic_set.clear();
        poly.validate();
        const Eigen::MatrixXd Tp = feature_matrix(poly, pcs);
        const Eigen::MatrixXd Cp = lstsq_minnorm(Tp, Y, cfg.rcond, cfg.ridge);
        const Eigen::MatrixXd R = Y - Tp * Cp;
        cfg.harmonic_set = pick_time_harmonics(R, pcs.times, cfg.base_period, cfg.harmonics);
    } else {
        cfg.harmonic_set.clear();
    }
    cfg.validate();

    const Eigen::MatrixXd Theta = feature_matrix(cfg, pcs);
    const Eigen::MatrixXd C = lstsq_minnorm(Theta, Y, cfg.rcond, cfg.ridge);

    RhsModel model;
    model.config = cfg;
    model.coeffs = C.transpose();
    model.residual_norms.resize(m);
    const Eigen::MatrixXd R = Theta * C - Y;
    for (int c = 0; c < m; ++c) model.residual_norms(c) = R.col(c).norm();
    if (!model.coeffs.allFinite()) throw NumericError("fit: non-finite coefficients");
    return model;
}

Eigen::VectorXd eval_rhs(const RhsModel& model, const Eigen::VectorXd& y, double t) {
    Eigen::VectorXd feat(model.config.n_features());
    build_features(model.config, y, t, feat);
    return model.coeffs * feat;
}

}  // namespace qgrom::sysid
