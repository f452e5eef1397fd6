#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qpscat {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

// Modes with |gamma| <= tau_rel * k are classified as grazing.
inline constexpr double kDefaultWoodTau = 1e-4;

// Periodicity lattice together with its dual basis.
// The duals satisfy vis . vj = delta_ij; D = |v1 x v2| is the cell area.
struct Lattice {
    Vec2 v1, v2;
    Vec2 v1s, v2s;
    double D = 0.0;
};

// Builds the dual basis from two independent periodicity vectors.
// Throws DegenerateBasisError when |v1 x v2| < 1e-12 |v1||v2|.
Lattice dual_basis(const Vec2& v1, const Vec2& v2);

// Downward-propagating plane wave exp(i(alpha.xt - gamma z)) with
// |alpha|^2 + gamma^2 = k^2 and gamma >= 0.
struct IncidentWave {
    double k = 0.0;
    Vec2 alpha = Vec2::Zero();
    double gamma = 0.0;
};

// Throws DomainError unless k > 0 and |alpha| <= k.
IncidentWave make_incident(double k, const Vec2& alpha = Vec2::Zero());

// One Rayleigh mode: vstar = 2 pi j v1s + 2 pi l v2s + alpha and
// gamma = sqrt(k^2 - |vstar|^2) on the branch with sqrt(1) = 1 and the cut
// along the negative imaginary semiaxis (positive real for propagating
// modes, positive imaginary for evanescent ones).
struct ModeIndex {
    int j = 0, l = 0;
    Vec2 vstar = Vec2::Zero();
    Complex gamma{0.0, 0.0};
};

ModeIndex gamma_exponent(int j, int l, const IncidentWave& inc, const Lattice& lat);

// All modes within the grazing band |gamma| <= tau_rel * k.
struct WoodSet {
    std::vector<ModeIndex> members;
    double tau_rel = kDefaultWoodTau;

    bool empty() const { return members.empty(); }
    bool contains(int j, int l) const;
};

// Every mode with |vstar| <= radius, enumerated in deterministic
// (j-major, then l) order with a two-ring index margin.
std::vector<ModeIndex> enumerate_modes(const IncidentWave& inc, const Lattice& lat, double radius);

// Grazing modes, searched over |vstar| <= 2k. tau_rel must lie in (0, 1e-2].
WoodSet wood_set(const IncidentWave& inc, const Lattice& lat, double tau_rel = kDefaultWoodTau);

// Modes with real gamma > tau_rel * k (grazing band excluded).
std::vector<ModeIndex> propagating_set(const IncidentWave& inc, const Lattice& lat,
                                       double tau_rel = kDefaultWoodTau);

struct ShiftAdmissibility {
    bool ok = false;
    std::vector<ModeIndex> offending;
};

// Checks the resonance-free constraint (1 - exp(i gamma d)) != 0 for every
// non-grazing mode; propagating modes violate it when gamma * d falls on a
// nonzero multiple of 2 pi (tolerance |1 - exp(i gamma d)| > 1e-8).
// Evanescent and grazing-band modes never violate.
ShiftAdmissibility shift_admissible(double d, const IncidentWave& inc, const Lattice& lat,
                                    double tau_rel = kDefaultWoodTau);

}  // namespace qpscat
