#include "qgrom/eof.hpp"

#include <cmath>
#include <string>

namespace qgrom::eof {

void EofBasis::validate() const {
    if (nx < 1 || ny < 1 || m < 1) throw DomainError("EofBasis: empty basis");
    if (eofs.rows() != n() || eofs.cols() != m || eigenvalues.size() != m ||
        mean.size() != n()) {
        throw ShapeError("EofBasis: inconsistent dimensions");
    }
    for (int i = 1; i < m; ++i) {
        if (eigenvalues(i) > eigenvalues(i - 1)) {
            throw DomainError("EofBasis: eigenvalues not descending");
        }
    }
    if (eigenvalues(m - 1) < 0.0) throw DomainError("EofBasis: negative eigenvalue");
}

void PcSeries::validate() const {
    if (times.size() != static_cast<std::size_t>(y.cols())) {
        throw ShapeError("PcSeries: times/values length mismatch");
    }
    if (times.size() >= 2) {
        const double d = times[1] - times[0];
        if (d <= 0.0) throw DomainError("PcSeries: non-increasing times");
        for (std::size_t k = 2; k < times.size(); ++k) {
            if (std::abs((times[k] - times[k - 1]) - d) > 1e-9 * std::abs(d)) {
                throw DomainError("PcSeries: non-uniform sampling at record " +
                                  std::to_string(k));
            }
        }
    }
    if (!y.allFinite()) throw NumericError("PcSeries: non-finite values");
}

double PcSeries::dt() const {
    if (times.size() < 2) throw DomainError("PcSeries: need at least 2 samples for dt");
    return times[1] - times[0];
}

EofBasis compute_eof(const Eigen::MatrixXd& X, bool mean_removed, int nx, int ny) {
    const int n = static_cast<int>(X.rows());
    const int K = static_cast<int>(X.cols());
    if (n != nx * ny) throw ShapeError("compute_eof: row count does not match nx*ny");
    if (K < 2) throw DomainError("compute_eof: need at least 2 snapshots");
    if (!X.allFinite()) throw NumericError("compute_eof: non-finite snapshot data");

    EofBasis b;
    b.nx = nx;
    b.ny = ny;
    b.mean_removed = mean_removed;
    b.mean = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd A = X;
    if (mean_removed) {
        b.mean = X.rowwise().mean();
        A.colwise() -= b.mean;
    }

    const Eigen::MatrixXd G = (A.transpose() * A) / static_cast<double>(K);
    b.total_variance = G.trace();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.info() != Eigen::Success) throw NumericError("compute_eof: eigensolve failed");

    const Eigen::VectorXd ev = es.eigenvalues();  // ascending
    const double lmax = std::max(ev(K - 1), 0.0);
    int kept = 0;
    for (int i = 0; i < K; ++i) {
        if (ev(i) > 1e-12 * lmax && ev(i) > 0.0) ++kept;
    }
    if (kept == 0) throw DomainError("compute_eof: data has no variance");

    b.m = kept;
    b.eigenvalues.resize(kept);
    b.eofs.resize(n, kept);
    for (int r = 0; r < kept; ++r) {
        const int i = K - 1 - r;  // descending
        const double lam = ev(i);
        b.eigenvalues(r) = lam;
        b.eofs.col(r) = A * es.eigenvectors().col(i) / std::sqrt(K * lam);
    }
    b.validate();
    return b;
}

int select_mode_count(const Eigen::VectorXd& eigenvalues, double fraction) {
    if (eigenvalues.size() == 0) throw DomainError("select_mode_count: no eigenvalues");
    if (fraction <= 0.0 || fraction > 1.0) {
        throw DomainError("select_mode_count: fraction must lie in (0, 1]");
    }
    const double total = eigenvalues.sum();
    if (total <= 0.0) throw DomainError("select_mode_count: zero total variance");
    double acc = 0.0;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        acc += eigenvalues(i);
        if (acc / total >= fraction) return i + 1;
    }
    return static_cast<int>(eigenvalues.size());
}

EofBasis truncate(const EofBasis& b, int m) {
    if (m < 1 || m > b.m) {
        throw DomainError("truncate: mode count " + std::to_string(m) + " not in [1, " +
                          std::to_string(b.m) + "]");
    }
    EofBasis t = b;
    t.m = m;
    t.eigenvalues = b.eigenvalues.head(m);
    t.eofs = b.eofs.leftCols(m);
    return t;
}

Eigen::VectorXd project_one(const EofBasis& b, const Eigen::VectorXd& x) {
    if (x.size() != b.n()) throw ShapeError("project_one: field size mismatch");
    return b.eofs.transpose() * (x - b.mean);
}

Eigen::MatrixXd project_series(const EofBasis& b, const Eigen::MatrixXd& X) {
    if (X.rows() != b.n()) throw ShapeError("project_series: field size mismatch");
    return b.eofs.transpose() * (X.colwise() - b.mean);
}

Eigen::VectorXd reconstruct(const EofBasis& b, const Eigen::VectorXd& z) {
    if (z.size() != b.m) throw ShapeError("reconstruct: PC vector has wrong length");
    return b.mean + b.eofs * z;
}

}  // namespace qgrom::eof
