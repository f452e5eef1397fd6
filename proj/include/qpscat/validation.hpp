#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qpscat/lattice.hpp"

namespace qpscat {

using FieldSampler = std::function<Complex(const Vec3&)>;

// |7-point discrete Laplacian + k^2 field| at x; second order in h.
double helmholtz_residual(const FieldSampler& field, const Vec3& x, double h, double k);

// |field(x + (m v1 + n v2, 0)) - exp(i alpha.v_mn) field(x)|.
double quasi_periodicity_defect(const FieldSampler& field, const Vec3& x, int m, int n,
                                const Vec2& alpha, const Lattice& lat);

struct RateFit {
    std::vector<std::pair<double, double>> samples;  // (A, err)
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least-squares fit of log(err) against log(A). Requires at least three
// samples with err > 0 and strictly increasing A; throws DomainError when
// every err sits below the 1e-15 noise floor.
RateFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples);

}  // namespace qpscat
