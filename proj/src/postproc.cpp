#include "qpscat/postproc.hpp"

#include <cmath>
#include <iostream>

#include "qpscat/errors.hpp"

namespace qpscat {

namespace {

// Relative spectral energy on the Nyquist ring of the (jacobian-weighted)
// density samples; a proxy for quadrature resolution of the coefficient
// integrals.
double nyquist_ring_energy(const Eigen::VectorXcd& values, const SurfaceGrid& grid) {
    const int N = grid.N, M = grid.M;
    double total = 0.0;
    std::vector<Complex> samples(static_cast<size_t>(N * M));
    for (int i = 0; i < N * M; ++i) {
        samples[static_cast<size_t>(i)] = values[i] * grid.jacobians[static_cast<size_t>(i)];
        total += std::norm(samples[static_cast<size_t>(i)]);
    }
    total /= N * M;  // Parseval: mean power equals sum of |c_f|^2
    if (total == 0.0) return 0.0;

    double ring = 0.0;
    auto coeff = [&](int fa, int fb) {
        Complex c(0.0, 0.0);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < M; ++j) {
                const double ang = -2.0 * M_PI * (static_cast<double>(fa) * i / N +
                                                  static_cast<double>(fb) * j / M);
                c += samples[static_cast<size_t>(i * M + j)] * Complex(std::cos(ang), std::sin(ang));
            }
        }
        return c / static_cast<double>(N * M);
    };
    for (int fb = -M / 2; fb < M / 2; ++fb) ring += std::norm(coeff(N / 2, fb));
    for (int fa = -N / 2 + 1; fa < N / 2; ++fa) ring += std::norm(coeff(fa, M / 2));
    return ring / total;
}

}  // namespace

RayleighSpectrum rayleigh_coefficients(const DensitySolution& density, const SolveConfig& cfg,
                                       int J_max) {
    const SurfaceGrid& grid = cfg.grid;
    const GreenParams& gp = cfg.gp;
    if (density.values.size() != grid.size()) {
        throw DomainError("rayleigh_coefficients: density size does not match the grid");
    }

    if (J_max < 0) {
        for (const ModeIndex& m : enumerate_modes(cfg.inc, gp.lat, 2.0 * cfg.inc.k)) {
            J_max = std::max({J_max, std::abs(m.j), std::abs(m.l)});
        }
        J_max = std::max(J_max, 1);
    }

    RayleighSpectrum spec;
    spec.gamma00 = cfg.inc.gamma;
    spec.k = cfg.inc.k;
    spec.tau_rel = gp.wood.tau_rel;
    spec.propagating = propagating_set(cfg.inc, gp.lat, gp.wood.tau_rel);

    const int n = grid.size();
    const double trap_w = 1.0 / static_cast<double>(n);
    const Complex i1(0.0, 1.0);
    const bool dirichlet = cfg.bc == BoundaryCondition::dirichlet;

    for (int j = -J_max; j <= J_max; ++j) {
        for (int l = -J_max; l <= J_max; ++l) {
            const ModeIndex m = gamma_exponent(j, l, cfg.inc, gp.lat);
            Complex w;
            if (gp.wood.contains(j, l)) {
                const auto it = gp.b.find({j, l});
                w = it != gp.b.end() ? it->second : Complex(1.0, 0.0);
            } else {
                w = std::pow(1.0 - std::exp(i1 * m.gamma * gp.d), gp.p) / m.gamma;
            }
            Complex Q(0.0, 0.0);
            for (int idx = 0; idx < n; ++idx) {
                const Vec3& xp = grid.nodes[static_cast<size_t>(idx)];
                const Vec2 xt(xp.x(), xp.y());
                // phi_qper = exp(i alpha.xt) phi_per; the alpha phases cancel
                // against the vstar one, leaving a periodic integrand.
                const Complex expo =
                    std::exp(i1 * (cfg.inc.alpha.dot(xt) - m.vstar.dot(xt)) - i1 * m.gamma * xp.z());
                Complex bracket(1.0, 0.0);
                if (dirichlet) {
                    const Vec3& nrm = grid.normals[static_cast<size_t>(idx)];
                    const Complex vdotn = m.vstar.x() * nrm.x() + m.vstar.y() * nrm.y() +
                                          m.gamma * nrm.z();
                    bracket = i1 * cfg.eta - i1 * cfg.xi * vdotn;
                }
                Q += density.values[idx] * expo * bracket *
                     (grid.jacobians[static_cast<size_t>(idx)] * trap_w);
            }
            spec.coeffs[{j, l}] = i1 / (2.0 * gp.lat.D) * w * Q;
        }
    }

    const double ring = nyquist_ring_energy(density.values, grid);
    if (ring > 1e-8) {
        spec.underresolved = true;
        std::cerr << "rayleigh_coefficients: warning, top Fourier modes of the density carry "
                  << ring << " relative energy; grid may be under-resolved\n";
    }
    return spec;
}

double energy_defect(const RayleighSpectrum& spec) {
    if (!(spec.gamma00 > spec.tau_rel * spec.k)) {
        throw DomainError("energy_defect: specular exponent is inside the grazing band");
    }
    double sum = 0.0;
    for (const ModeIndex& m : spec.propagating) {
        const auto it = spec.coeffs.find({m.j, m.l});
        if (it == spec.coeffs.end()) continue;
        sum += m.gamma.real() / spec.gamma00 * std::norm(it->second);
    }
    return std::abs(sum - 1.0);
}

double eps1(const RayleighSpectrum& spec, Complex ref_B00) {
    const auto it = spec.coeffs.find({0, 0});
    if (it == spec.coeffs.end()) throw DomainError("eps1: spectrum lacks the specular order");
    return std::abs(it->second - ref_B00);
}

}  // namespace qpscat
