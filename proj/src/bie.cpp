#include "qpscat/bie.hpp"

#include <cmath>
#include <exception>

#include "qpscat/errors.hpp"
#include "qpscat/quadrature.hpp"

namespace qpscat {

namespace {

constexpr double kPouRatio = 0.5;  // plateau fraction of the local POU

// Boundary-condition combination of a kernel value/gradient pair.
inline Complex combine(const GreenValue& g, const Vec3& normal_x, const Vec3& normal_xp,
                       BoundaryCondition bc, double xi, double eta) {
    if (bc == BoundaryCondition::dirichlet) {
        const Complex dl = g.gradient_source.dot(normal_xp.cast<Complex>());
        return Complex(0.0, eta) * g.value + xi * dl;
    }
    // dG/dn(x) = -gradient_source . n(x).
    return -g.gradient_source.dot(normal_x.cast<Complex>());
}

// The q = 0 free-space term of one lattice image, with its window weight.
// `xv` is the difference vector already translated by the image, `lat_off`
// the lateral offset entering the window argument (equal to the lateral part
// of xv).
GreenValue windowed_image_term(const Vec3& xv, const GreenParams& gp) {
    const double rho = std::hypot(xv.x(), xv.y());
    const double t = rho / gp.A;
    double w = 1.0, dw = 0.0;
    if (gp.window_kind == WindowKind::smooth) {
        w = chi(t, gp.window_c);
        dw = chi_derivative(t, gp.window_c) / gp.A;
    }
    GreenValue g = free_green(xv, gp.inc.k);
    g.gradient_source *= w;
    if (dw != 0.0 && rho > 0.0) {
        // Window depends on the lateral difference; its source derivative is
        // minus the target one.
        const Complex extra = g.value * dw / rho;
        g.gradient_source[0] -= extra * xv.x();
        g.gradient_source[1] -= extra * xv.y();
    }
    g.value *= w;
    return g;
}

}  // namespace

void validate_solve_config(const SolveConfig& cfg) {
    if (cfg.xi == 0.0 || cfg.eta == 0.0 || cfg.eta / cfg.xi >= 0.0) {
        throw ConfigError("solve config: couplings must satisfy xi != 0, eta != 0, eta/xi < 0");
    }
    if (!(cfg.gmres_tol > 0.0) || cfg.gmres_tol > 1e-2) {
        throw ConfigError("solve config: gmres_tol must lie in (0, 1e-2]");
    }
    if (cfg.grid.size() <= 0) throw ConfigError("solve config: empty surface grid");
    if (cfg.grid.size() > cfg.max_unknowns) {
        throw ResolutionError("solve config: unknown count " + std::to_string(cfg.grid.size()) +
                              " exceeds the configured cap " + std::to_string(cfg.max_unknowns));
    }
    if (std::abs(cfg.inc.k - cfg.gp.inc.k) > 1e-14 * cfg.inc.k ||
        (cfg.inc.alpha - cfg.gp.inc.alpha).norm() > 1e-14 * (1.0 + cfg.inc.alpha.norm())) {
        throw ConfigError("solve config: incident wave disagrees with Green-function parameters");
    }
    if (!(cfg.polar.delta > 0.0) || cfg.polar.n_r < 2 || cfg.polar.n_theta < 4) {
        throw ConfigError("solve config: invalid local quadrature parameters");
    }
    if (cfg.gp.p >= 1) {
        const auto adm = shift_admissible(cfg.gp.d, cfg.inc, cfg.gp.lat, cfg.gp.wood.tau_rel);
        if (!adm.ok) throw AdmissibilityError("solve config: shift distance not admissible");
    }
}

Complex periodic_kernel(const Vec3& x, const Vec3& xp, const Vec3& normal_x,
                        const Vec3& normal_xp, const GreenParams& gp, BoundaryCondition bc,
                        double xi, double eta) {
    const Vec3 diff = x - xp;
    const GreenValue g = complete_green(diff, gp);
    const double ang = gp.inc.alpha.dot(Vec2(xp.x() - x.x(), xp.y() - x.y()));
    return combine(g, normal_x, normal_xp, bc, xi, eta) * Complex(std::cos(ang), std::sin(ang));
}

Eigen::MatrixXcd assemble_operator(const SolveConfig& cfg) {
    validate_solve_config(cfg);
    const SurfaceGrid& grid = cfg.grid;
    const GreenParams& gp = cfg.gp;
    const int N = grid.N, M = grid.M, n = grid.size();
    const double trap_w = 1.0 / static_cast<double>(N * M);
    const double delta = cfg.polar.delta;
    const Complex jump = cfg.bc == BoundaryCondition::dirichlet ? Complex(cfg.xi / 2.0, 0.0)
                                                                : Complex(-0.5, 0.0);

    // Polar rule shared by all targets: offsets in unit-cell coordinates and
    // the interpolation weight stencils they induce (a circular shift of the
    // same stencil serves every target).
    const QuadRule radial = gauss_legendre(cfg.polar.n_r, 0.0, delta);
    const int n_theta = cfg.polar.n_theta;
    const double theta_w = 2.0 * M_PI / n_theta;
    struct PolarNode {
        double da, db, weight;
        std::vector<double> wa, wb;  // stencils indexed by (i_target - i_source) mod N
    };
    std::vector<PolarNode> pnodes;
    pnodes.reserve(static_cast<size_t>(cfg.polar.n_r) * n_theta);
    for (int g = 0; g < cfg.polar.n_r; ++g) {
        const double r = radial.nodes[static_cast<size_t>(g)];
        const double pou = chi(r / delta, kPouRatio);
        if (pou == 0.0) continue;
        for (int t = 0; t < n_theta; ++t) {
            const double th = theta_w * t;
            PolarNode node;
            node.da = r * std::cos(th);
            node.db = r * std::sin(th);
            node.weight = radial.weights[static_cast<size_t>(g)] * theta_w * r * pou;
            node.wa.resize(static_cast<size_t>(N));
            node.wb.resize(static_cast<size_t>(M));
            const auto wa = trig_interp_weights(N, node.da);
            const auto wb = trig_interp_weights(M, node.db);
            // trig_interp_weights(N, t)[i] interpolates the sample at i/N; the
            // stencil entry for shift s = (i_target - i_source) mod N is the
            // weight of the sample at -s/N, i.e. index (N - s) mod N.
            for (int s = 0; s < N; ++s) node.wa[static_cast<size_t>(s)] = wa[static_cast<size_t>((N - s) % N)];
            for (int s = 0; s < M; ++s) node.wb[static_cast<size_t>(s)] = wb[static_cast<size_t>((M - s) % M)];
            pnodes.push_back(std::move(node));
        }
    }

    Eigen::MatrixXcd A(n, n);
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        if (failure) continue;
        try {
            const int ia = i / M, ib = i % M;
            const double a_i = static_cast<double>(ia) / N;
            const double b_i = static_cast<double>(ib) / M;
            const Vec3& x = grid.nodes[static_cast<size_t>(i)];
            const Vec3& nx = grid.normals[static_cast<size_t>(i)];

            // Trapezoid part: full kernel away from the target, the POU-
            // deflated kernel inside the local patch.
            for (int j = 0; j < n; ++j) {
                const int ja = j / M, jb = j % M;
                double da = a_i - static_cast<double>(ja) / N;
                double db = b_i - static_cast<double>(jb) / M;
                const double mr = std::round(da), nr = std::round(db);
                da -= mr;
                db -= nr;
                const double rho_param = std::hypot(da, db);
                const double pou = rho_param < delta ? chi(rho_param / delta, kPouRatio) : 0.0;

                const Vec3& xp = grid.nodes[static_cast<size_t>(j)];
                const Vec3& np = grid.normals[static_cast<size_t>(j)];
                const Vec3 diff = x - xp;
                Complex kval;
                if (pou == 0.0) {
                    const GreenValue g = complete_green(diff, gp);
                    kval = combine(g, nx, np, cfg.bc, cfg.xi, cfg.eta);
                } else {
                    const int mi = static_cast<int>(mr), ni = static_cast<int>(nr);
                    const GreenValue gsm = complete_green_without_image(diff, gp, mi, ni);
                    kval = combine(gsm, nx, np, cfg.bc, cfg.xi, cfg.eta);
                    if (pou < 1.0) {
                        const Vec2 vmn = mr * gp.lat.v1 + nr * gp.lat.v2;
                        const Vec3 xv(diff.x() + vmn.x(), diff.y() + vmn.y(), diff.z());
                        GreenValue gs = windowed_image_term(xv, gp);
                        const double ang = -gp.inc.alpha.dot(vmn);
                        const Complex ph(std::cos(ang), std::sin(ang));
                        gs.value *= ph;
                        gs.gradient_source *= ph;
                        kval += (1.0 - pou) * combine(gs, nx, np, cfg.bc, cfg.xi, cfg.eta);
                    }
                }
                const double ang = gp.inc.alpha.dot(Vec2(xp.x() - x.x(), xp.y() - x.y()));
                Complex entry = kval * Complex(std::cos(ang), std::sin(ang)) *
                                (grid.jacobians[static_cast<size_t>(j)] * trap_w);
                if (j == i) entry += jump;
                A(i, j) = entry;
            }

            // Local polar correction, spread through the trigonometric
            // interpolation stencils.
            for (const PolarNode& node : pnodes) {
                const double a = a_i + node.da;
                const double b = b_i + node.db;
                const SurfacePoint sp = surface_point(grid.spec, a, b);
                const Vec3 diff = x - sp.x;
                GreenValue gs = windowed_image_term(diff, gp);
                const Complex kv = combine(gs, nx, sp.normal, cfg.bc, cfg.xi, cfg.eta);
                const double ang = gp.inc.alpha.dot(Vec2(sp.x.x() - x.x(), sp.x.y() - x.y()));
                const Complex contrib = kv * Complex(std::cos(ang), std::sin(ang)) *
                                        (node.weight * sp.jacobian);
                for (int ja = 0; ja < N; ++ja) {
                    const double wja = node.wa[static_cast<size_t>((ia - ja + N) % N)];
                    if (wja == 0.0) continue;
                    const Complex cw = contrib * wja;
                    for (int jb = 0; jb < M; ++jb) {
                        A(i, ja * M + jb) += cw * node.wb[static_cast<size_t>((ib - jb + M) % M)];
                    }
                }
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return A;
}

Eigen::VectorXcd rhs(const SolveConfig& cfg) {
    const SurfaceGrid& grid = cfg.grid;
    Eigen::VectorXcd b(grid.size());
    const double gamma = cfg.inc.gamma;
    for (int i = 0; i < grid.size(); ++i) {
        const Vec3& x = grid.nodes[static_cast<size_t>(i)];
        const Complex ph = std::exp(Complex(0.0, -gamma * x.z()));
        if (cfg.bc == BoundaryCondition::dirichlet) {
            b[i] = -ph;
        } else {
            const Vec3& nrm = grid.normals[static_cast<size_t>(i)];
            const Complex dir =
                Complex(0.0, 1.0) * (cfg.inc.alpha.x() * nrm.x() + cfg.inc.alpha.y() * nrm.y() -
                                     gamma * nrm.z());
            b[i] = -dir * ph;
        }
    }
    return b;
}

DensitySolution gmres_solve(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& b, double tol,
                            int maxit) {
    if (op.rows() != op.cols() || op.rows() != b.size()) {
        throw DomainError("gmres_solve: operator/right-hand-side shape mismatch");
    }
    if (!(tol > 0.0)) throw DomainError("gmres_solve: tolerance must be positive");
    const Eigen::Index n = b.size();
    DensitySolution sol;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        sol.values = Eigen::VectorXcd::Zero(n);
        return sol;
    }
    maxit = std::min<int>(maxit, static_cast<int>(n));

    Eigen::MatrixXcd V(n, maxit + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(maxit + 1, maxit);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(maxit + 1);
    std::vector<double> cs(static_cast<size_t>(maxit));
    std::vector<Complex> sn(static_cast<size_t>(maxit));

    V.col(0) = b / bnorm;
    g[0] = bnorm;
    double resid = 1.0;
    int k = 0;
    bool breakdown = false;
    for (; k < maxit; ++k) {
        Eigen::VectorXcd w = op * V.col(k);
        for (Eigen::Index i = 0; i <= k; ++i) {
            const Complex h = V.col(i).dot(w);
            H(i, k) = h;
            w -= h * V.col(i);
        }
        const double hnext = w.norm();
        H(k + 1, k) = hnext;
        if (hnext > 1e-300) {
            V.col(k + 1) = w / hnext;
        } else {
            breakdown = true;
        }
        // Apply stored rotations, then zero the subdiagonal entry.
        for (Eigen::Index i = 0; i < k; ++i) {
            const Complex t = cs[static_cast<size_t>(i)] * H(i, k) + sn[static_cast<size_t>(i)] * H(i + 1, k);
            H(i + 1, k) = -std::conj(sn[static_cast<size_t>(i)]) * H(i, k) +
                          cs[static_cast<size_t>(i)] * H(i + 1, k);
            H(i, k) = t;
        }
        const Complex a = H(k, k);
        const Complex hb = H(k + 1, k);
        const double r = std::sqrt(std::norm(a) + std::norm(hb));
        if (r == 0.0) {
            cs[static_cast<size_t>(k)] = 1.0;
            sn[static_cast<size_t>(k)] = Complex(0.0, 0.0);
        } else if (std::abs(a) == 0.0) {
            cs[static_cast<size_t>(k)] = 0.0;
            sn[static_cast<size_t>(k)] = Complex(1.0, 0.0);
        } else {
            cs[static_cast<size_t>(k)] = std::abs(a) / r;
            sn[static_cast<size_t>(k)] = (a / std::abs(a)) * std::conj(hb) / r;
        }
        H(k, k) = cs[static_cast<size_t>(k)] * a + sn[static_cast<size_t>(k)] * hb;
        H(k + 1, k) = Complex(0.0, 0.0);
        g[k + 1] = -std::conj(sn[static_cast<size_t>(k)]) * g[k];
        g[k] = cs[static_cast<size_t>(k)] * g[k];
        resid = std::abs(g[k + 1]) / bnorm;
        if (resid <= tol || breakdown) {
            ++k;
            break;
        }
    }
    if (resid > tol) {
        throw ConvergenceError("gmres_solve: no convergence after " + std::to_string(k) +
                                   " iterations (best relative residual " +
                                   std::to_string(resid) + ")",
                               static_cast<int>(k), resid);
    }
    // Back substitution on the triangular system.
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(k);
    for (Eigen::Index i = k - 1; i >= 0; --i) {
        Complex s = g[i];
        for (Eigen::Index j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
        y[i] = s / H(i, i);
    }
    sol.values = V.leftCols(k) * y;
    sol.iterations = static_cast<int>(k);
    sol.final_residual = (op * sol.values - b).norm() / bnorm;
    return sol;
}

}  // namespace qpscat
