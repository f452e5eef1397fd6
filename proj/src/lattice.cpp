#include "qpscat/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "qpscat/errors.hpp"

namespace qpscat {

namespace {
double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
}  // namespace

Lattice dual_basis(const Vec2& v1, const Vec2& v2) {
    const double det = cross2(v1, v2);
    if (std::abs(det) < 1e-12 * v1.norm() * v2.norm()) {
        throw DegenerateBasisError("dual_basis: periodicity vectors are (nearly) collinear");
    }
    Lattice lat;
    lat.v1 = v1;
    lat.v2 = v2;
    // v1s . v1 = 1, v1s . v2 = 0 and the symmetric pair for v2s.
    lat.v1s = Vec2(v2.y(), -v2.x()) / det;
    lat.v2s = Vec2(-v1.y(), v1.x()) / det;
    lat.D = std::abs(det);
    return lat;
}

IncidentWave make_incident(double k, const Vec2& alpha) {
    if (!(k > 0.0)) throw DomainError("make_incident: wavenumber must be positive");
    const double g2 = k * k - alpha.squaredNorm();
    if (g2 < 0.0) {
        throw DomainError("make_incident: |alpha| exceeds k, incidence is not downward-propagating");
    }
    return IncidentWave{k, alpha, std::sqrt(g2)};
}

ModeIndex gamma_exponent(int j, int l, const IncidentWave& inc, const Lattice& lat) {
    ModeIndex m;
    m.j = j;
    m.l = l;
    m.vstar = 2.0 * M_PI * (static_cast<double>(j) * lat.v1s + static_cast<double>(l) * lat.v2s) +
              inc.alpha;
    const double t = inc.k * inc.k - m.vstar.squaredNorm();
    // Branch with sqrt(1) = 1, cut on the negative imaginary semiaxis:
    // positive real for t > 0, positive imaginary for t < 0.
    m.gamma = t >= 0.0 ? Complex(std::sqrt(t), 0.0) : Complex(0.0, std::sqrt(-t));
    return m;
}

bool WoodSet::contains(int j, int l) const {
    return std::any_of(members.begin(), members.end(),
                       [&](const ModeIndex& m) { return m.j == j && m.l == l; });
}

std::vector<ModeIndex> enumerate_modes(const IncidentWave& inc, const Lattice& lat, double radius) {
    // |j| = |(vstar - alpha) . v1| / (2 pi) <= (radius + |alpha|) |v1| / (2 pi).
    const double reach = radius + inc.alpha.norm();
    const int jmax = static_cast<int>(std::ceil(reach * lat.v1.norm() / (2.0 * M_PI))) + 2;
    const int lmax = static_cast<int>(std::ceil(reach * lat.v2.norm() / (2.0 * M_PI))) + 2;
    std::vector<ModeIndex> out;
    out.reserve(static_cast<size_t>(2 * jmax + 1) * static_cast<size_t>(2 * lmax + 1) / 2);
    for (int j = -jmax; j <= jmax; ++j) {
        for (int l = -lmax; l <= lmax; ++l) {
            ModeIndex m = gamma_exponent(j, l, inc, lat);
            if (m.vstar.norm() <= radius) out.push_back(m);
        }
    }
    return out;
}

WoodSet wood_set(const IncidentWave& inc, const Lattice& lat, double tau_rel) {
    if (!(tau_rel > 0.0) || tau_rel > 1e-2) {
        throw DomainError("wood_set: tau_rel must lie in (0, 1e-2]");
    }
    WoodSet w;
    w.tau_rel = tau_rel;
    for (const ModeIndex& m : enumerate_modes(inc, lat, 2.0 * inc.k)) {
        if (std::abs(m.gamma) <= tau_rel * inc.k) w.members.push_back(m);
    }
    return w;
}

std::vector<ModeIndex> propagating_set(const IncidentWave& inc, const Lattice& lat,
                                       double tau_rel) {
    std::vector<ModeIndex> out;
    for (const ModeIndex& m : enumerate_modes(inc, lat, 2.0 * inc.k)) {
        if (m.gamma.imag() == 0.0 && m.gamma.real() > tau_rel * inc.k) out.push_back(m);
    }
    return out;
}

ShiftAdmissibility shift_admissible(double d, const IncidentWave& inc, const Lattice& lat,
                                    double tau_rel) {
    if (!(d > 0.0)) throw DomainError("shift_admissible: shift distance must be positive");
    ShiftAdmissibility res;
    res.ok = true;
    for (const ModeIndex& m : enumerate_modes(inc, lat, 2.0 * inc.k)) {
        if (m.gamma.imag() != 0.0) continue;                  // evanescent never violates
        if (std::abs(m.gamma) <= tau_rel * inc.k) continue;   // grazing handled by completion
        const Complex one_minus = 1.0 - std::exp(Complex(0.0, 1.0) * m.gamma * d);
        if (std::abs(one_minus) <= 1e-8) {
            res.ok = false;
            res.offending.push_back(m);
        }
    }
    return res;
}

}  // namespace qpscat
