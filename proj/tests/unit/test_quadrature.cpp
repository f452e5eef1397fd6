#include <doctest.h>

#include <cmath>

#include "qpscat/quadrature.hpp"

using namespace qpscat;

TEST_CASE("gauss-legendre: frozen 5-point nodes and polynomial exactness") {
    const QuadRule r = gauss_legendre(5, -1.0, 1.0);
    // Classical values: +-sqrt(5 - 2 sqrt(10/7))/3, +-sqrt(5 + 2 sqrt(10/7))/3, 0.
    CHECK(r.nodes[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.nodes[3] == doctest::Approx(std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0)
                            .epsilon(1e-14));
    CHECK(r.nodes[4] == doctest::Approx(std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0)
                            .epsilon(1e-14));
    CHECK(r.weights[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));

    // Exact for degree <= 2n-1 = 9 on [0, 2].
    const QuadRule s = gauss_legendre(5, 0.0, 2.0);
    for (int deg = 0; deg <= 9; ++deg) {
        double acc = 0.0;
        for (size_t i = 0; i < s.nodes.size(); ++i) {
            acc += s.weights[i] * std::pow(s.nodes[i], deg);
        }
        const double exact = std::pow(2.0, deg + 1) / (deg + 1);
        CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("gauss-legendre: oscillatory integrand convergence") {
    // int_0^1 cos(8 x) dx = sin(8)/8.
    const double exact = std::sin(8.0) / 8.0;
    const QuadRule r = gauss_legendre(24, 0.0, 1.0);
    double acc = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::cos(8.0 * r.nodes[i]);
    CHECK(std::abs(acc - exact) < 1e-14);
}

TEST_CASE("trig interpolation: cardinal property and trig-polynomial exactness") {
    const int N = 16;
    // Cardinal: at grid points the stencil is a Kronecker delta.
    for (int i = 0; i < N; ++i) {
        const auto w = trig_interp_weights(N, static_cast<double>(i) / N);
        for (int j = 0; j < N; ++j) {
            CHECK(w[static_cast<size_t>(j)] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    }

    // Reproduces low-order trigonometric polynomials between nodes.
    auto f = [](double t) {
        return 0.7 + std::cos(2.0 * M_PI * t) - 0.3 * std::sin(2.0 * M_PI * 3.0 * t) +
               0.11 * std::cos(2.0 * M_PI * 7.0 * t);
    };
    for (double t : {0.013, 0.37, 0.5201, 0.833, 0.999}) {
        const auto w = trig_interp_weights(N, t);
        double acc = 0.0;
        for (int j = 0; j < N; ++j) {
            acc += w[static_cast<size_t>(j)] * f(static_cast<double>(j) / N);
        }
        CHECK(acc == doctest::Approx(f(t)).epsilon(1e-12));
    }
}

TEST_CASE("trig interpolation: weights sum to one anywhere") {
    for (double t : {-0.41, 0.077, 0.25, 0.49999, 1.73}) {
        const auto w = trig_interp_weights(12, t);
        double acc = 0.0;
        for (double v : w) acc += v;
        CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
    }
}
