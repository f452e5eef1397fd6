#pragma once

#include <optional>

#include "qpscat/postproc.hpp"

namespace qpscat {

struct SolveSummary {
    double k = 0.0;
    int N = 0, M = 0;
    double A = 0.0;
    int p = 0;
    double d = 0.0;
    int iterations = 0;
    double eps = 0.0;
    double eps1 = -1.0;  // negative: no reference supplied
    Complex B00{0.0, 0.0};
    double wall_seconds = 0.0;
};

struct ScatteringResult {
    DensitySolution density;
    RayleighSpectrum spectrum;
    SolveSummary report;
};

// Assembles, solves and post-processes one configuration. When a reference
// specular coefficient is supplied the report carries eps1 as well.
ScatteringResult solve_scattering(const SolveConfig& cfg,
                                  std::optional<Complex> ref_B00 = std::nullopt);

}  // namespace qpscat
