#include <doctest.h>

#include <cmath>
#include <random>

#include "qgrom/qg/jacobian.hpp"

using qgrom::Field;
using qgrom::qg::arakawa_jacobian;

namespace {

// Smooth random field vanishing on the boundary: a sum of sine modes.
Field random_sine_field(int n, double h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const double L = (n - 1) * h;
    Field f(n, n, 0.0);
    for (int kx = 1; kx <= 4; ++kx) {
        for (int ky = 1; ky <= 4; ++ky) {
            const double a = amp(rng);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    f(i, j) +=
                        a * std::sin(M_PI * kx * i * h / L) * std::sin(M_PI * ky * j * h / L);
        }
    }
    return f;
}

}  // namespace

TEST_SUITE("jacobian") {

TEST_CASE("J(x, y) = 1 in the interior, 0 on the boundary ring") {
    const int n = 17;
    const double h = 0.25;
    Field fx(n, n), gy(n, n), J(n, n, 99.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            fx(i, j) = i * h;
            gy(i, j) = j * h;
        }
    arakawa_jacobian(fx, gy, h, J);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) CHECK(J(i, j) == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 0; i < n; ++i) {
        CHECK(J(i, 0) == 0.0);
        CHECK(J(i, n - 1) == 0.0);
        CHECK(J(0, i) == 0.0);
        CHECK(J(n - 1, i) == 0.0);
    }
}

TEST_CASE("self-bracket vanishes and J(f,g) = -J(g,f)") {
    const int n = 21;
    const double h = 0.1;
    const Field f = random_sine_field(n, h, 7);
    const Field g = random_sine_field(n, h, 8);
    Field Jff(n, n), Jfg(n, n), Jgf(n, n);
    arakawa_jacobian(f, f, h, Jff);
    arakawa_jacobian(f, g, h, Jfg);
    arakawa_jacobian(g, f, h, Jgf);
    const double scale = f.max_abs() * g.max_abs() / (h * h);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            CHECK(std::abs(Jff(i, j)) <= 1e-13 * f.max_abs() * f.max_abs() / (h * h));
            CHECK(std::abs(Jfg(i, j) + Jgf(i, j)) <= 1e-13 * scale);
        }
}

TEST_CASE("discrete conservation of J, fJ and gJ for boundary-vanishing fields") {
    const int n = 33;
    const double h = 0.2;
    const Field f = random_sine_field(n, h, 101);
    const Field g = random_sine_field(n, h, 202);
    Field J(n, n);
    arakawa_jacobian(f, g, h, J);
    double s = 0, sf = 0, sg = 0, as = 0, asf = 0, asg = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            s += J(i, j);
            sf += f(i, j) * J(i, j);
            sg += g(i, j) * J(i, j);
            as += std::abs(J(i, j));
            asf += std::abs(f(i, j) * J(i, j));
            asg += std::abs(g(i, j) * J(i, j));
        }
    CHECK(std::abs(s) <= 1e-12 * as);
    CHECK(std::abs(sf) <= 1e-12 * asf);
    CHECK(std::abs(sg) <= 1e-12 * asg);
}

TEST_CASE("a constant offset in the second argument drops out") {
    const int n = 17;
    const double h = 0.5;
    const Field f = random_sine_field(n, h, 5);
    Field g = random_sine_field(n, h, 6);
    Field J0(n, n), J1(n, n);
    arakawa_jacobian(f, g, h, J0);
    for (std::size_t k = 0; k < g.size(); ++k) g.data()[k] += 10.0;
    arakawa_jacobian(f, g, h, J1);
    const double scale = f.max_abs() * 10.0 / (h * h);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i)
            CHECK(std::abs(J1(i, j) - J0(i, j)) <= 1e-13 * scale);
}

TEST_CASE("convergence to the analytic Jacobian for smooth fields") {
    // f = sin(pi x) sin(pi y), g = x y on [0,1]^2:
    // J = pi (x cos(pi x) sin(pi y) - y sin(pi x) cos(pi y)).
    auto max_err = [](int n) {
        const double h = 1.0 / (n - 1);
        Field f(n, n), g(n, n), J(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = i * h, y = j * h;
                f(i, j) = std::sin(M_PI * x) * std::sin(M_PI * y);
                g(i, j) = x * y;
            }
        arakawa_jacobian(f, g, h, J);
        double e = 0.0;
        for (int j = 1; j < n - 1; ++j)
            for (int i = 1; i < n - 1; ++i) {
                const double x = i * h, y = j * h;
                const double exact = M_PI * (x * std::cos(M_PI * x) * std::sin(M_PI * y) -
                                             y * std::sin(M_PI * x) * std::cos(M_PI * y));
                e = std::max(e, std::abs(J(i, j) - exact));
            }
        return e;
    };
    const double e1 = max_err(33), e2 = max_err(65);
    CHECK(std::log2(e1 / e2) > 1.9);
}

}
