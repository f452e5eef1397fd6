#include "qpscat/quadrature.hpp"

#include <cmath>

#include "qpscat/errors.hpp"

namespace qpscat {

QuadRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    QuadRule rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        // Map [-1, 1] -> [a, b]; store ascending.
        rule.nodes[static_cast<size_t>(n - 1 - i)] = 0.5 * (b - a) * x + 0.5 * (a + b);
        rule.weights[static_cast<size_t>(n - 1 - i)] = 0.5 * (b - a) * w;
    }
    return rule;
}

std::vector<double> trig_interp_weights(int N, double t) {
    if (N < 2 || N % 2 != 0) throw DomainError("trig_interp_weights: N must be even, >= 2");
    std::vector<double> w(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        double u = t - static_cast<double>(i) / N;
        u -= std::round(u);  // nearest-period representative
        if (std::abs(u) < 1e-14) {
            w[static_cast<size_t>(i)] = 1.0;
        } else {
            // (1/N) sin(N pi u) cot(pi u): the closed form of the even-N
            // Fourier interpolation matrix row.
            w[static_cast<size_t>(i)] =
                std::sin(N * M_PI * u) / (N * std::tan(M_PI * u));
        }
    }
    return w;
}

}  // namespace qpscat
