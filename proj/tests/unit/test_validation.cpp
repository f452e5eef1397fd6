#include <doctest.h>

#include <cmath>
#include <random>

#include "qpscat/errors.hpp"
#include "qpscat/greens.hpp"
#include "qpscat/validation.hpp"

using namespace qpscat;

TEST_CASE("helmholtz residual: plane wave and free-space kernel") {
    const double k = 1.0;
    const FieldSampler plane = [k](const Vec3& x) {
        return std::exp(Complex(0.0, k * x.z()));
    };
    CHECK(helmholtz_residual(plane, Vec3(0.2, 0.1, 0.4), 1e-3, k) < 1e-5);

    // Free-space kernel away from the source: residual scales like h^2.
    const Vec3 x0(0.0, 0.0, 0.0);
    const FieldSampler green = [&](const Vec3& x) { return free_green(x - x0, 2.0).value; };
    const Vec3 probe(0.3, 0.4, 0.5);  // |probe| ~ 0.7
    const double r2 = helmholtz_residual(green, probe, 1e-2, 2.0);
    const double r3 = helmholtz_residual(green, probe, 1e-3, 2.0);
    CHECK(r3 < r2 / 50.0);  // ~100x for a second-order stencil
    CHECK(r3 < 1e-3);
}

TEST_CASE("quasi-periodicity defect: exact for spectral fields") {
    const Lattice lat = dual_basis(Vec2(1, 0), Vec2(0, 1));
    const IncidentWave inc = make_incident(1.0, Vec2(0.2, 0.1));
    const FieldSampler field = [&](const Vec3& x) {
        return spectral_qp_green_classical(Vec2(x.x(), x.y()), x.z(), inc, lat);
    };
    const Vec3 x(0.31, 0.47, 0.8);
    CHECK(quasi_periodicity_defect(field, x, 1, 0, inc.alpha, lat) < 1e-13);
    CHECK(quasi_periodicity_defect(field, x, -2, 3, inc.alpha, lat) < 1e-12);

    // At alpha = 0 the defect reduces to |field(x + v) - field(x)|.
    const IncidentWave inc0 = make_incident(1.0);
    const FieldSampler f0 = [&](const Vec3& x) {
        return spectral_qp_green_classical(Vec2(x.x(), x.y()), x.z(), inc0, lat);
    };
    const double direct = std::abs(f0(Vec3(1.31, 0.47, 0.8)) - f0(x));
    CHECK(quasi_periodicity_defect(f0, x, 1, 0, inc0.alpha, lat) ==
          doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("fit_decay_rate: exact power law and noisy synthetic data") {
    std::vector<std::pair<double, double>> clean;
    for (double a : {10.0, 20.0, 40.0, 80.0, 160.0}) clean.emplace_back(a, std::pow(a, -2.0));
    const RateFit f = fit_decay_rate(clean);
    CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<std::pair<double, double>> noisy;
    for (double a = 10.0; a <= 1e4; a *= 2.0) {
        noisy.emplace_back(a, 5.0 * std::pow(a, -1.5) * (1.0 + noise(rng)));
    }
    const RateFit g = fit_decay_rate(noisy);
    CHECK(std::abs(g.slope + 1.5) < 0.05);
    CHECK(g.r_squared > 0.999);
}

TEST_CASE("fit_decay_rate: input validation") {
    CHECK_THROWS_AS(fit_decay_rate({{1.0, 1.0}, {2.0, 0.5}}), DomainError);
    CHECK_THROWS_AS(fit_decay_rate({{1.0, 1.0}, {2.0, 0.5}, {2.0, 0.2}}), DomainError);
    CHECK_THROWS_AS(fit_decay_rate({{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.2}}), DomainError);
    CHECK_THROWS_AS(fit_decay_rate({{1.0, 1e-18}, {2.0, 1e-18}, {4.0, 1e-18}}), DomainError);
}
