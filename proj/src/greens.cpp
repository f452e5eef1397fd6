#include "qpscat/greens.hpp"

#include <cmath>

#include "qpscat/errors.hpp"

namespace qpscat {

namespace {

constexpr double kFourPi = 4.0 * M_PI;
constexpr double kPoleGuard = 1e-12;  // absolute, in period units

inline void sincos_fast(double a, double* s, double* c) {
#if defined(__GNUC__)
    ::sincos(a, s, c);
#else
    *s = std::sin(a);
    *c = std::cos(a);
#endif
}

}  // namespace

std::vector<long long> fd_coeffs(int p) {
    if (p < 0) throw DomainError("fd_coeffs: order must be nonnegative");
    if (p > 12) throw OrderTooLargeError("fd_coeffs: orders above 12 are rejected");
    std::vector<long long> a(static_cast<size_t>(p) + 1);
    a[0] = 1;
    for (int q = 1; q <= p; ++q) a[q] = -a[q - 1] * (p - q + 1) / q;
    return a;
}

double chi(double t, double c) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("chi: ratio c must lie in (0, 1)");
    if (t <= c) return 1.0;
    if (t >= 1.0) return 0.0;
    const double u = (t - c) / (1.0 - c);
    return std::exp(2.0 * std::exp(-1.0 / u) / (u - 1.0));
}

double chi_derivative(double t, double c) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("chi_derivative: ratio c must lie in (0, 1)");
    if (t <= c || t >= 1.0) return 0.0;
    const double u = (t - c) / (1.0 - c);
    const double um1 = u - 1.0;
    const double sprime = 2.0 * std::exp(-1.0 / u) * (-(u * u - u + 1.0)) / (u * u * um1 * um1);
    const double value = std::exp(2.0 * std::exp(-1.0 / u) / um1);
    return value * sprime / (1.0 - c);
}

GreenValue free_green(const Vec3& x, double k) {
    const double r = x.norm();
    if (r < kPoleGuard) throw SingularityError("free_green: evaluation at the source point");
    double s, c;
    sincos_fast(k * r, &s, &c);
    const Complex e(c, s);
    GreenValue g;
    g.value = e / (kFourPi * r);
    // grad_x G = (ik - 1/r) G x/r; the source gradient is its negative.
    const Complex gfac = g.value * (Complex(0.0, k) - 1.0 / r) / r;
    g.gradient_source = -gfac * x.cast<Complex>();
    return g;
}

GreenValue shifted_green(const Vec3& x, double k, int p, double d) {
    const auto a = fd_coeffs(p);
    if (p >= 1 && !(d > 0.0)) throw DomainError("shifted_green: shift distance must be positive");
    GreenValue g;
    for (int q = 0; q <= p; ++q) {
        const Vec3 xq(x.x(), x.y(), x.z() + q * d);
        const GreenValue t = free_green(xq, k);
        const double aq = static_cast<double>(a[static_cast<size_t>(q)]);
        g.value += aq * t.value;
        g.gradient_source += aq * t.gradient_source;
    }
    return g;
}

HProbe h_function(double rho, double eps, double eps_hat, int p, double k) {
    if (!(rho > 0.0)) throw DomainError("h_function: rho must be positive");
    const auto a = fd_coeffs(p);
    // Factor the common phase e^{ik rho}; the remaining per-term phase
    // k rho (sqrt(1+e^2) - 1) is tiny for large rho and carries the
    // cancellation between the finite-difference terms accurately.
    Complex acc(0.0, 0.0);
    for (int q = 0; q <= p; ++q) {
        const double e = eps + q * eps_hat;
        const double s = std::sqrt(1.0 + e * e);
        const double delta = k * rho * (e * e) / (1.0 + s);
        double sn, cs;
        sincos_fast(delta, &sn, &cs);
        acc += static_cast<double>(a[static_cast<size_t>(q)]) * Complex(cs, sn) / s;
    }
    double sn, cs;
    sincos_fast(k * rho, &sn, &cs);
    HProbe h;
    h.rho = rho;
    h.eps = eps;
    h.eps_hat = eps_hat;
    h.p = p;
    h.value = Complex(cs, sn) / rho * acc;
    return h;
}

GreenParams make_green_params(const IncidentWave& inc, const Lattice& lat, int p, double d,
                              double A, WindowKind kind, double window_c, double tau_rel) {
    if (p < 0) throw DomainError("make_green_params: shift order must be nonnegative");
    if (!(A > 0.0)) throw DomainError("make_green_params: window radius must be positive");
    if (!(window_c > 0.0 && window_c < 1.0)) {
        throw DomainError("make_green_params: window ratio must lie in (0, 1)");
    }
    GreenParams gp;
    gp.inc = inc;
    gp.lat = lat;
    gp.p = p;
    gp.d = d;
    gp.A = A;
    gp.window_c = window_c;
    gp.window_kind = kind;
    gp.wood = wood_set(inc, lat, tau_rel);
    if (!gp.wood.empty() && p < 3) {
        throw WoodFrequencyError(
            "make_green_params: grazing modes present, shift order p >= 3 required");
    }
    if (p >= 1) {
        if (!(d > 0.0)) throw DomainError("make_green_params: shift distance must be positive");
        const auto adm = shift_admissible(d, inc, lat, tau_rel);
        if (!adm.ok) {
            std::string who;
            for (const auto& m : adm.offending) {
                who += " (" + std::to_string(m.j) + "," + std::to_string(m.l) + ")";
            }
            throw AdmissibilityError("make_green_params: shift distance resonates with mode(s)" +
                                     who);
        }
    }
    for (const auto& m : gp.wood.members) gp.b[{m.j, m.l}] = Complex(1.0, 0.0);
    return gp;
}

namespace {

// Shared core of the windowed lattice sums. Accumulates per-row partial sums
// in a fixed (m ascending, n ascending) order so results are deterministic
// and independent of threading outside this function.
//
// skip_q0: when true, the q = 0 free-space term of image (m_skip, n_skip) is
// excluded (used to separate the singular part for local quadrature).
GreenValue windowed_sum_core(const Vec3& x, const GreenParams& gp, bool skip_q0, int m_skip,
                             int n_skip) {
    const double A = gp.A;
    if (!(A > 0.0)) throw DomainError("qp_green_truncated: window radius must be positive");
    const auto acoef = fd_coeffs(gp.p);
    const int p = gp.p;
    const double k = gp.inc.k;
    const double c = gp.window_c;
    const bool smooth = gp.window_kind == WindowKind::smooth;
    const Vec2 xt(x.x(), x.y());
    const double z = x.z();

    double zq[16];
    for (int q = 0; q <= p; ++q) zq[q] = z + q * gp.d;

    // The smooth window keeps |xt + v_mn| <= A; the hard window keeps
    // |v_mn| <= A. Both enumerate v_mn in a disk.
    const Vec2 center = smooth ? Vec2(-xt) : Vec2(Vec2::Zero());
    const double R = A;
    const double R2 = R * R;

    const Lattice& lat = gp.lat;
    const double v2n2 = lat.v2.squaredNorm();
    const double m_center = center.dot(lat.v1s);
    const double m_reach = R * lat.v1s.norm();
    const int m_lo = static_cast<int>(std::ceil(m_center - m_reach - 1e-9));
    const int m_hi = static_cast<int>(std::floor(m_center + m_reach + 1e-9));

    const bool has_phase = gp.inc.alpha.squaredNorm() > 0.0;
    const double pa1 = -gp.inc.alpha.dot(lat.v1);
    const double pa2 = -gp.inc.alpha.dot(lat.v2);
    const Complex step_phase = has_phase ? Complex(std::cos(pa2), std::sin(pa2)) : Complex(1.0, 0.0);

    Complex total_v(0.0, 0.0);
    Complex total_gx(0.0, 0.0), total_gy(0.0, 0.0), total_gz(0.0, 0.0);

    for (int m = m_lo; m <= m_hi; ++m) {
        // Range of n with |m v1 + n v2 - center|^2 <= R^2.
        const Vec2 u = static_cast<double>(m) * lat.v1 - center;
        const double b = u.dot(lat.v2);
        const double disc = b * b - v2n2 * (u.squaredNorm() - R2);
        if (disc < 0.0) continue;
        const double sq = std::sqrt(disc);
        const int n_lo = static_cast<int>(std::ceil((-b - sq) / v2n2 - 1e-9));
        const int n_hi = static_cast<int>(std::floor((-b + sq) / v2n2 + 1e-9));
        if (n_hi < n_lo) continue;

        const double bx = xt.x() + m * lat.v1.x();
        const double by = xt.y() + m * lat.v1.y();

        Complex row_v(0.0, 0.0), row_gx(0.0, 0.0), row_gy(0.0, 0.0), row_gz(0.0, 0.0);
        Complex phase(1.0, 0.0);
        if (has_phase) {
            const double ang = pa1 * m + pa2 * n_lo;
            phase = Complex(std::cos(ang), std::sin(ang));
        }

        for (int n = n_lo; n <= n_hi; ++n) {
            const Complex ph = phase;
            if (has_phase) phase *= step_phase;

            const double px = bx + n * lat.v2.x();
            const double py = by + n * lat.v2.y();
            const double rho2 = px * px + py * py;

            double w = 1.0, dw = 0.0;
            if (smooth) {
                if (rho2 >= R2) continue;
                const double rho = std::sqrt(rho2);
                const double t = rho / A;
                if (t > c) {
                    w = chi(t, c);
                    if (w == 0.0) continue;
                    // d/drho of chi(rho/A): used for the window part of the gradient.
                    dw = chi_derivative(t, c) / A;
                }
            } else {
                const double lx = px - xt.x();
                const double ly = py - xt.y();
                if (lx * lx + ly * ly > R2 * (1.0 + 1e-14)) continue;
            }

            const bool is_skip = skip_q0 && m == m_skip && n == n_skip;

            Complex val(0.0, 0.0);
            Complex glat(0.0, 0.0);
            Complex gz(0.0, 0.0);
            for (int q = 0; q <= p; ++q) {
                if (is_skip && q == 0) continue;
                const double r2 = rho2 + zq[q] * zq[q];
                if (r2 < kPoleGuard * kPoleGuard) {
                    throw PoleProximityError("qp_green_truncated: evaluation point within the "
                                             "guard radius of a pole image");
                }
                const double r = std::sqrt(r2);
                double sn, cs;
                sincos_fast(k * r, &sn, &cs);
                const double aq = static_cast<double>(acoef[static_cast<size_t>(q)]);
                const Complex vq = (aq / r) * Complex(cs, sn);
                val += vq;
                const Complex gq = vq * (Complex(0.0, k) - 1.0 / r) / r;
                glat += gq;
                gz += gq * zq[q];
            }

            row_v += ph * (w * val);
            const Complex wg = dw != 0.0 ? ph * (val * dw / std::sqrt(rho2)) : Complex(0.0, 0.0);
            row_gx += ph * (w * glat) * px + wg * px;
            row_gy += ph * (w * glat) * py + wg * py;
            row_gz += ph * (w * gz);
        }
        total_v += row_v;
        total_gx += row_gx;
        total_gy += row_gy;
        total_gz += row_gz;
    }

    GreenValue g;
    g.value = total_v / kFourPi;
    // gradient_source = -grad_x of the sum.
    g.gradient_source =
        Eigen::Vector3cd(-total_gx / kFourPi, -total_gy / kFourPi, -total_gz / kFourPi);
    return g;
}

}  // namespace

GreenValue qp_green_truncated(const Vec3& x, const GreenParams& gp) {
    return windowed_sum_core(x, gp, false, 0, 0);
}

GreenValue qp_green_truncated_without_image(const Vec3& x, const GreenParams& gp, int m_skip,
                                            int n_skip) {
    return windowed_sum_core(x, gp, true, m_skip, n_skip);
}

Complex spectral_qp_green_classical(const Vec2& xt, double z, const IncidentWave& inc,
                                    const Lattice& lat, double tol) {
    const WoodSet wood = wood_set(inc, lat);
    if (!wood.empty()) {
        throw WoodFrequencyError(
            "spectral_qp_green_classical: grazing modes present, classical sum diverges");
    }
    const double period = std::sqrt(lat.D);
    if (std::abs(z) < 1e-3 * period) {
        throw SlowConvergenceError(
            "spectral_qp_green_classical: |z| below 1e-3 periods, truncation bound unreachable");
    }
    const double kappa = std::log(1.0 / tol) / std::abs(z);
    const double radius = std::sqrt(inc.k * inc.k + kappa * kappa);
    Complex sum(0.0, 0.0);
    for (const ModeIndex& m : enumerate_modes(inc, lat, radius)) {
        const Complex ez = std::exp(Complex(0.0, 1.0) * m.gamma * std::abs(z));
        const double ph = m.vstar.dot(xt);
        sum += Complex(std::cos(ph), std::sin(ph)) * ez / m.gamma;
    }
    return Complex(0.0, 1.0) / (2.0 * lat.D) * sum;
}

Complex spectral_qp_green_shifted(const Vec2& xt, double z, const GreenParams& gp, double tol) {
    if (!(z > 0.0)) {
        throw DomainError("spectral_qp_green_shifted: defined for z > 0 only");
    }
    if (!gp.wood.empty() && gp.p < 2) {
        throw WoodFrequencyError(
            "spectral_qp_green_shifted: p >= 2 required at Wood configurations");
    }
    const double kappa = std::log(1.0 / tol) / z;
    const double radius = std::sqrt(gp.inc.k * gp.inc.k + kappa * kappa);
    const Complex i1(0.0, 1.0);
    Complex sum(0.0, 0.0);
    for (const ModeIndex& m : enumerate_modes(gp.inc, gp.lat, radius)) {
        if (gp.wood.contains(m.j, m.l)) continue;
        const Complex w = std::pow(1.0 - std::exp(i1 * m.gamma * gp.d), gp.p) / m.gamma;
        const double ph = m.vstar.dot(xt);
        sum += Complex(std::cos(ph), std::sin(ph)) * std::exp(i1 * m.gamma * z) * w;
    }
    return i1 / (2.0 * gp.lat.D) * sum;
}

GreenValue grazing_completion_with_gradient(const Vec2& xt, double z, const GreenParams& gp) {
    GreenValue g;
    if (gp.wood.empty()) return g;
    const Complex i1(0.0, 1.0);
    const Complex scale = i1 / (2.0 * gp.lat.D);
    for (const ModeIndex& m : gp.wood.members) {
        const auto it = gp.b.find({m.j, m.l});
        const Complex b = it != gp.b.end() ? it->second : Complex(1.0, 0.0);
        const double ph = m.vstar.dot(xt);
        const Complex term = scale * b * Complex(std::cos(ph), std::sin(ph)) *
                             std::exp(i1 * m.gamma * z);
        g.value += term;
        // grad = (i vstar, i gamma) term; source gradient is the negative.
        g.gradient_source[0] -= i1 * m.vstar.x() * term;
        g.gradient_source[1] -= i1 * m.vstar.y() * term;
        g.gradient_source[2] -= i1 * m.gamma * term;
    }
    return g;
}

Complex grazing_completion(const Vec2& xt, double z, const GreenParams& gp) {
    return grazing_completion_with_gradient(xt, z, gp).value;
}

GreenValue complete_green(const Vec3& x, const GreenParams& gp) {
    GreenValue g = qp_green_truncated(x, gp);
    const GreenValue v = grazing_completion_with_gradient(Vec2(x.x(), x.y()), x.z(), gp);
    g.value += v.value;
    g.gradient_source += v.gradient_source;
    return g;
}

GreenValue complete_green_without_image(const Vec3& x, const GreenParams& gp, int m_skip,
                                        int n_skip) {
    GreenValue g = qp_green_truncated_without_image(x, gp, m_skip, n_skip);
    const GreenValue v = grazing_completion_with_gradient(Vec2(x.x(), x.y()), x.z(), gp);
    g.value += v.value;
    g.gradient_source += v.gradient_source;
    return g;
}

}  // namespace qpscat
