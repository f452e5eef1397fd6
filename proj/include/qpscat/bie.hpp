#pragma once

#include <Eigen/Dense>

#include "qpscat/greens.hpp"
#include "qpscat/surface.hpp"

namespace qpscat {

enum class BoundaryCondition { dirichlet, neumann };

// Local singular-quadrature rule: a radial C-infinity partition of unity of
// radius delta (in unit-cell coordinates) around each target, integrated in
// polar coordinates with n_r Gauss-Legendre nodes on [0, delta] and n_theta
// uniform angular nodes. n_theta should be divisible by 4 so the rule keeps
// the lattice symmetries of the surface.
struct PolarRule {
    double delta = 0.25;
    int n_r = 24;
    int n_theta = 32;
};

struct SolveConfig {
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    GreenParams gp;
    SurfaceGrid grid;
    IncidentWave inc;
    double xi = 1.0;
    double eta = -1.0;
    double gmres_tol = 1e-6;
    int gmres_maxit = 200;
    PolarRule polar;
    int max_unknowns = 4096;
};

// Checks the coupling signs (eta/xi < 0), tolerance range, grid/incidence
// consistency, and shift admissibility. Throws ConfigError on violation.
void validate_solve_config(const SolveConfig& cfg);

// Periodic kernel between two surface points:
//   Dirichlet: [i eta G + xi dG/dn(x')] exp(i alpha.(xt' - xt))
//   Neumann:   [dG/dn(x)] exp(i alpha.(xt' - xt))
// with G the complete (windowed, shifted, completed) Green function.
Complex periodic_kernel(const Vec3& x, const Vec3& xp, const Vec3& normal_x,
                        const Vec3& normal_xp, const GreenParams& gp, BoundaryCondition bc,
                        double xi, double eta);

// Dense Nystrom matrix: periodic-trapezoid weights away from the diagonal,
// the singular self-image handled by the polar partition-of-unity rule with
// trigonometric interpolation folded back into nodal coefficients, and the
// jump term (+xi/2 Dirichlet, -1/2 Neumann) on the diagonal.
Eigen::MatrixXcd assemble_operator(const SolveConfig& cfg);

Eigen::VectorXcd rhs(const SolveConfig& cfg);

struct DensitySolution {
    Eigen::VectorXcd values;
    int iterations = 0;
    double final_residual = 0.0;
};

// Unrestarted GMRES (modified Gram-Schmidt Arnoldi with Givens updates).
// Throws ConvergenceError carrying the best residual after maxit steps.
DensitySolution gmres_solve(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& b, double tol,
                            int maxit);

}  // namespace qpscat
