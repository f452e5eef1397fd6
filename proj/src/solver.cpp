#include "qpscat/solver.hpp"

#include <chrono>

namespace qpscat {

ScatteringResult solve_scattering(const SolveConfig& cfg, std::optional<Complex> ref_B00) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_solve_config(cfg);

    ScatteringResult res;
    const Eigen::MatrixXcd op = assemble_operator(cfg);
    const Eigen::VectorXcd b = rhs(cfg);
    res.density = gmres_solve(op, b, cfg.gmres_tol, cfg.gmres_maxit);
    res.spectrum = rayleigh_coefficients(res.density, cfg);

    res.report.k = cfg.inc.k;
    res.report.N = cfg.grid.N;
    res.report.M = cfg.grid.M;
    res.report.A = cfg.gp.A;
    res.report.p = cfg.gp.p;
    res.report.d = cfg.gp.d;
    res.report.iterations = res.density.iterations;
    res.report.eps = energy_defect(res.spectrum);
    res.report.B00 = res.spectrum.coeffs.at({0, 0});
    if (ref_B00) res.report.eps1 = eps1(res.spectrum, *ref_B00);
    res.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace qpscat
