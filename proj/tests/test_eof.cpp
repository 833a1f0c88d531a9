#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "qgrom/eof.hpp"

using namespace qgrom;
using namespace qgrom::eof;

namespace {

Eigen::MatrixXd random_matrix(int n, int K, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd X(n, K);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < n; ++i) X(i, k) = g(rng) + 0.3 * i;
    return X;
}

}  // namespace

TEST_SUITE("eof") {

TEST_CASE("snapshot method matches the dense covariance eigendecomposition") {
    const int n = 30, K = 12;
    const Eigen::MatrixXd X = random_matrix(n, K, 17);
    const EofBasis b = compute_eof(X, true, 6, 5);

    const Eigen::VectorXd mean = X.rowwise().mean();
    Eigen::MatrixXd A = X.colwise() - mean;
    const Eigen::MatrixXd C = A * A.transpose() / double(K);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    REQUIRE(es.info() == Eigen::Success);

    // Mean removal leaves at most K-1 nonzero modes.
    CHECK(b.m <= K - 1);
    CHECK(b.total_variance == doctest::Approx(C.trace()).epsilon(1e-10));
    for (int r = 0; r < b.m; ++r) {
        const double lam_dense = es.eigenvalues()(n - 1 - r);
        CHECK(b.eigenvalues(r) == doctest::Approx(lam_dense).epsilon(1e-9));
        const Eigen::VectorXd v = es.eigenvectors().col(n - 1 - r);
        const double dot = std::abs(v.dot(b.eofs.col(r)));
        CHECK(dot == doctest::Approx(1.0).epsilon(1e-8));  // same pattern up to sign
    }
}

TEST_CASE("patterns are orthonormal and reproduce the data") {
    const int n = 24, K = 10;
    const Eigen::MatrixXd X = random_matrix(n, K, 3);
    const EofBasis b = compute_eof(X, true, 4, 6);
    const Eigen::MatrixXd G = b.eofs.transpose() * b.eofs;
    CHECK((G - Eigen::MatrixXd::Identity(b.m, b.m)).cwiseAbs().maxCoeff() < 1e-10);

    // Full basis: project + reconstruct returns each anomaly snapshot.
    for (int k = 0; k < K; ++k) {
        const Eigen::VectorXd z = project_one(b, X.col(k));
        const Eigen::VectorXd back = reconstruct(b, z);
        CHECK((back - X.col(k)).norm() <= 1e-9 * X.col(k).norm());
    }
}

TEST_CASE("mean_removed=false treats the data as anomalies") {
    const int n = 12, K = 6;
    const Eigen::MatrixXd X = random_matrix(n, K, 9);
    const EofBasis b = compute_eof(X, false, 3, 4);
    CHECK(b.mean.norm() == 0.0);
    CHECK(b.total_variance ==
          doctest::Approx((X.transpose() * X).trace() / double(K)).epsilon(1e-10));
    // Without mean removal the basis can hold up to K modes.
    CHECK(b.m <= K);
    const Eigen::VectorXd z = project_one(b, X.col(0));
    CHECK((reconstruct(b, z) - X.col(0)).norm() <= 1e-9 * X.col(0).norm());
}

TEST_CASE("variances and projections agree: var(z_r) = lambda_r") {
    const int n = 20, K = 15;
    const Eigen::MatrixXd X = random_matrix(n, K, 23);
    const EofBasis b = compute_eof(X, true, 5, 4);
    const Eigen::MatrixXd Z = project_series(b, X);
    REQUIRE(Z.rows() == b.m);
    REQUIRE(Z.cols() == K);
    for (int r = 0; r < b.m; ++r) {
        const double var = Z.row(r).squaredNorm() / double(K);
        CHECK(var == doctest::Approx(b.eigenvalues(r)).epsilon(1e-9));
    }
}

TEST_CASE("rank-deficient data keeps only the true modes") {
    // Two fixed patterns, so only two nonzero eigenvalues survive.
    const int n = 16, K = 8;
    Eigen::VectorXd p1 = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    Eigen::VectorXd p2(n);
    for (int i = 0; i < n; ++i) p2(i) = std::sin(0.7 * i);
    Eigen::MatrixXd X(n, K);
    for (int k = 0; k < K; ++k) X.col(k) = std::cos(1.1 * k) * p1 + 2.0 * std::sin(0.4 * k) * p2;
    const EofBasis b = compute_eof(X, false, 4, 4);
    CHECK(b.m == 2);
    CHECK(b.eigenvalues(0) >= b.eigenvalues(1));
}

TEST_CASE("select_mode_count walks the cumulative spectrum") {
    Eigen::VectorXd ev(4);
    ev << 6.0, 2.0, 1.5, 0.5;  // total 10
    CHECK(select_mode_count(ev, 0.5) == 1);
    CHECK(select_mode_count(ev, 0.60) == 1);
    CHECK(select_mode_count(ev, 0.61) == 2);
    CHECK(select_mode_count(ev, 0.95) == 3);
    CHECK(select_mode_count(ev, 1.0) == 4);
    CHECK_THROWS_AS(select_mode_count(ev, 0.0), DomainError);
    CHECK_THROWS_AS(select_mode_count(ev, 1.1), DomainError);
}

TEST_CASE("truncate keeps the leading modes") {
    const Eigen::MatrixXd X = random_matrix(18, 9, 31);
    const EofBasis b = compute_eof(X, true, 6, 3);
    REQUIRE(b.m >= 3);
    const EofBasis t = truncate(b, 2);
    CHECK(t.m == 2);
    CHECK(t.eigenvalues(0) == b.eigenvalues(0));
    CHECK(t.eofs.col(1) == b.eofs.col(1));
    CHECK(t.total_variance == b.total_variance);
    CHECK_THROWS_AS(truncate(b, 0), DomainError);
    CHECK_THROWS_AS(truncate(b, b.m + 1), DomainError);
}

TEST_CASE("degenerate inputs are rejected") {
    Eigen::MatrixXd one(6, 1);
    one.setOnes();
    CHECK_THROWS_AS(compute_eof(one, false, 2, 3), DomainError);
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(6, 4);
    CHECK_THROWS_AS(compute_eof(z, false, 2, 3), DomainError);  // no variance
    Eigen::MatrixXd bad(5, 4);
    bad.setOnes();
    CHECK_THROWS_AS(compute_eof(bad, false, 2, 3), ShapeError);  // 5 != 2*3
    // Constant columns with the mean removed: nothing left either.
    Eigen::MatrixXd c = Eigen::MatrixXd::Ones(6, 4);
    CHECK_THROWS_AS(compute_eof(c, true, 2, 3), DomainError);
}

TEST_CASE("PcSeries validation enforces uniform finite sampling") {
    PcSeries p;
    p.times = {0.0, 1.0, 2.0};
    p.y = Eigen::MatrixXd::Zero(2, 3);
    CHECK_NOTHROW(p.validate());
    CHECK(p.dt() == 1.0);
    CHECK(p.m() == 2);
    CHECK(p.K() == 3);
    p.times = {0.0, 1.0, 2.5};
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.times = {0.0, 1.0};
    CHECK_THROWS_AS(p.validate(), ShapeError);
    p.times = {0.0, 1.0, 2.0};
    p.y(1, 1) = std::nan("");
    CHECK_THROWS_AS(p.validate(), NumericError);
}

}
