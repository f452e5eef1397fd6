#pragma once

#include <vector>

namespace qpscat {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule with n nodes on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Weights of the periodic trigonometric interpolant through N equispaced
// samples at i/N, evaluated at parameter t (period 1). Even N; the Nyquist
// mode is symmetrized so real data yield a real interpolant. Row sums to 1
// and reproduces trigonometric polynomials up to degree N/2 - 1 exactly.
std::vector<double> trig_interp_weights(int N, double t);

}  // namespace qpscat
