#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qpscat/lattice.hpp"

namespace qpscat {

enum class WindowKind { hard, smooth };

// Parameters of the shifted, windowed, grazing-mode-completed quasi-periodic
// Green function. Construct through make_green_params, which validates the
// shift constraints and populates the grazing set with unit completion
// coefficients.
struct GreenParams {
    IncidentWave inc;
    Lattice lat;
    int p = 0;           // shift (finite-difference) order
    double d = 0.0;      // shift distance, > 0 when p >= 1
    double A = 0.0;      // window radius (outer radius of the cutoff)
    double window_c = 0.5;  // inner/outer radius ratio of the smooth cutoff
    WindowKind window_kind = WindowKind::smooth;
    WoodSet wood;        // grazing set U
    std::map<std::pair<int, int>, Complex> b;  // completion coefficients on U
};

GreenParams make_green_params(const IncidentWave& inc, const Lattice& lat, int p, double d,
                              double A, WindowKind kind = WindowKind::smooth,
                              double window_c = 0.5, double tau_rel = kDefaultWoodTau);

// Kernel value together with its gradient with respect to the source point:
// for a kernel K(x - x'), gradient_source = d/dx' K = -grad K evaluated at
// the difference vector.
struct GreenValue {
    Complex value{0.0, 0.0};
    Eigen::Vector3cd gradient_source = Eigen::Vector3cd::Zero();
};

// Finite-difference coefficients a_pq = (-1)^q binom(p, q), exact integers.
// Throws OrderTooLargeError for p > 12.
std::vector<long long> fd_coeffs(int p);

// Smooth radial cutoff: 1 for t <= c, 0 for t >= 1, and the C-infinity blend
// exp(2 e^{-1/u} / (u - 1)) with u = (t - c)/(1 - c) in between.
double chi(double t, double c);
double chi_derivative(double t, double c);

// Free-space kernel e^{ik|x|} / (4 pi |x|).
GreenValue free_green(const Vec3& x, double k);

// p-th order finite difference of the free-space kernel along z with step d;
// poles at (0, 0, -qd) for q = 0..p.
GreenValue shifted_green(const Vec3& x, double k, int p, double d);

// Asymptotics probe h(rho, eps, eps_hat) = sum_q a_pq g(rho, eps + q eps_hat)
// with g(rho, e) = e^{ik rho sqrt(1+e^2)} / (rho sqrt(1+e^2)). Evaluated with
// the common phase e^{ik rho} factored out so the high-order cancellation
// survives in double precision.
struct HProbe {
    double rho = 0.0;
    double eps = 0.0;
    double eps_hat = 0.0;
    int p = 0;
    Complex value{0.0, 0.0};
};

HProbe h_function(double rho, double eps, double eps_hat, int p, double k);

// Windowed spatial lattice sum of the shifted Green function. The hard
// window keeps lattice points |m v1 + n v2| <= A; the smooth window weights
// terms by chi(|xt + m v1 + n v2| / A, window_c). Gradient includes the
// window-weight derivative.
GreenValue qp_green_truncated(const Vec3& x, const GreenParams& gp);

// Same sum with the q = 0 free-space term of one designated image excluded;
// used by the Nystrom assembly to split off the singular part.
GreenValue qp_green_truncated_without_image(const Vec3& x, const GreenParams& gp, int m_skip,
                                            int n_skip);

// Classical spectral representation (i/2D) sum exp(i vstar.xt + i gamma |z|)
// / gamma, truncated once the evanescent factor drops below tol. Throws
// WoodFrequencyError when the grazing set is nonempty and
// SlowConvergenceError for |z| below 1e-3 periods.
Complex spectral_qp_green_classical(const Vec2& xt, double z, const IncidentWave& inc,
                                    const Lattice& lat, double tol = 1e-14);

// Spectral form of the shifted Green function for z > 0: modes outside U
// weighted by (1 - e^{i gamma d})^p / gamma. Requires p >= 2 when U is
// nonempty.
Complex spectral_qp_green_shifted(const Vec2& xt, double z, const GreenParams& gp,
                                  double tol = 1e-14);

// Plane-wave completion v restoring the grazing Fourier harmonics; zero when
// U is empty.
Complex grazing_completion(const Vec2& xt, double z, const GreenParams& gp);
GreenValue grazing_completion_with_gradient(const Vec2& xt, double z, const GreenParams& gp);

// Complete Green function: windowed shifted lattice sum plus completion.
GreenValue complete_green(const Vec3& x, const GreenParams& gp);
GreenValue complete_green_without_image(const Vec3& x, const GreenParams& gp, int m_skip,
                                        int n_skip);

}  // namespace qpscat
