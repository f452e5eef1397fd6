#include "qpscat/validation.hpp"

#include <cmath>

#include "qpscat/errors.hpp"

namespace qpscat {

double helmholtz_residual(const FieldSampler& field, const Vec3& x, double h, double k) {
    Complex lap(0.0, 0.0);
    const Complex center = field(x);
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 e = Vec3::Zero();
        e[axis] = h;
        lap += field(x + e) + field(x - e);
    }
    lap = (lap - 6.0 * center) / (h * h);
    return std::abs(lap + k * k * center);
}

double quasi_periodicity_defect(const FieldSampler& field, const Vec3& x, int m, int n,
                                const Vec2& alpha, const Lattice& lat) {
    const Vec2 vmn = static_cast<double>(m) * lat.v1 + static_cast<double>(n) * lat.v2;
    const Vec3 shifted(x.x() + vmn.x(), x.y() + vmn.y(), x.z());
    const double ph = alpha.dot(vmn);
    return std::abs(field(shifted) - Complex(std::cos(ph), std::sin(ph)) * field(x));
}

RateFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3) throw DomainError("fit_decay_rate: need at least three samples");
    bool any_above_floor = false;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].second > 0.0)) {
            throw DomainError("fit_decay_rate: errors must be positive");
        }
        if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
            throw DomainError("fit_decay_rate: abscissae must increase strictly");
        }
        if (samples[i].second >= 1e-15) any_above_floor = true;
    }
    if (!any_above_floor) {
        throw DomainError("fit_decay_rate: all samples below the 1e-15 noise floor");
    }

    const double n = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [a, err] : samples) {
        const double lx = std::log(a), ly = std::log(err);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    RateFit fit;
    fit.samples = samples;
    const double den = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [a, err] : samples) {
        const double r = std::log(err) - (fit.intercept + fit.slope * std::log(a));
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

}  // namespace qpscat
