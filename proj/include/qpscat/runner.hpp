#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpscat/solver.hpp"

namespace qpscat {

enum class RunMode { solve, sweep_A, sweep_k, green_conv, make_ref };

// One declarative run: a solve, an A- or k-sweep, a Green-function
// convergence study, or reference generation. Parsed from a JSON config
// file; every optional field has a documented default (see README).
struct RunConfig {
    RunMode mode = RunMode::solve;
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    double k = 0.0;
    Vec2 alpha = Vec2::Zero();
    Vec2 v1 = Vec2(1.0, 0.0);
    Vec2 v2 = Vec2(0.0, 1.0);
    SurfaceKind surface_kind = SurfaceKind::cosine_product;
    double amplitude = 0.5;
    int harmonic_a = 1, harmonic_b = 1;
    int N = 16, M = 16;
    int p = 0;
    double d = 0.0;
    double A = 0.0;
    WindowKind window = WindowKind::smooth;
    double window_c = 0.5;
    double tau_rel = kDefaultWoodTau;
    double xi = 1.0;
    double eta = 0.0;  // 0 requests the default -k
    double gmres_tol = 1e-6;
    int gmres_maxit = 200;
    PolarRule polar;
    int max_unknowns = 4096;
    std::vector<double> A_values;
    std::vector<double> k_values;
    double A_ref = 0.0;  // green_conv reference radius; 0 selects 2 max(A_values)
    std::string reference;  // reference file for eps1 (optional)
    std::string output = ".";
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Builds the solver configuration for one sweep point.
SolveConfig make_solve_config(const RunConfig& rc, double k, double A);

// Canonical probe points (lattice coordinates mapped to space, z in
// [0.3, 1.0]) used by the Green-function convergence study.
std::vector<Vec3> green_conv_probe_points(const Lattice& lat);

struct RunOverrides {
    std::optional<std::string> mode;
    std::optional<std::string> output;
    int threads = 0;  // 0 keeps the environment default
    long long seed = -1;  // reserved; echoed into the report
};

// Executes the run and writes results.csv, report.json and (for make_ref)
// reference.json under the output directory. Returns 0 on success, 1 on a
// configuration/validation failure, 2 when some sweep rows failed (the CSV
// carries their error column).
int run(const std::string& config_path, const RunOverrides& overrides = {});

}  // namespace qpscat
