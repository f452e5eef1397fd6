#pragma once

#include <map>
#include <utility>

#include "qpscat/bie.hpp"

namespace qpscat {

// Outgoing Rayleigh coefficients over the index window |j|, |l| <= J_max,
// with the propagating set and the data the error indicators need.
struct RayleighSpectrum {
    std::map<std::pair<int, int>, Complex> coeffs;
    std::vector<ModeIndex> propagating;
    double gamma00 = 0.0;
    double k = 0.0;
    double tau_rel = kDefaultWoodTau;
    bool underresolved = false;  // top Fourier mode of the integrand above 1e-8
};

// Surface-integral formula for the outgoing coefficients. J_max < 0 selects
// the smallest window covering |vstar| <= 2k. Emits a resolution warning on
// stderr (and sets the flag) when the integrand is marginally resolved.
RayleighSpectrum rayleigh_coefficients(const DensitySolution& density, const SolveConfig& cfg,
                                       int J_max = -1);

// Energy-conservation defect |sum_P (gamma/gamma00) |B|^2 - 1|. Throws
// DomainError when the specular exponent gamma00 sits inside the grazing
// band.
double energy_defect(const RayleighSpectrum& spec);

// Absolute error in the specular coefficient against a reference value.
double eps1(const RayleighSpectrum& spec, Complex ref_B00);

struct ErrorReport {
    double eps = 0.0;
    double eps1 = -1.0;  // negative when no reference was supplied
    int iterations = 0;
};

}  // namespace qpscat
