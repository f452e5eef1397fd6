#include "qpscat/surface.hpp"

#include <cmath>
#include <limits>

#include "qpscat/errors.hpp"

namespace qpscat {

SurfaceSample surface_height(const SurfaceSpec& spec, double a, double b) {
    SurfaceSample s;
    switch (spec.kind) {
        case SurfaceKind::flat:
            break;
        case SurfaceKind::cosine_product: {
            const double ca = std::cos(2.0 * M_PI * a), sa = std::sin(2.0 * M_PI * a);
            const double cb = std::cos(2.0 * M_PI * b), sb = std::sin(2.0 * M_PI * b);
            s.f = spec.amplitude * ca * cb;
            s.fa = -2.0 * M_PI * spec.amplitude * sa * cb;
            s.fb = -2.0 * M_PI * spec.amplitude * ca * sb;
            break;
        }
        case SurfaceKind::custom_harmonic: {
            const double wa = 2.0 * M_PI * spec.harmonic_a, wb = 2.0 * M_PI * spec.harmonic_b;
            s.f = spec.amplitude * std::cos(wa * a) * std::cos(wb * b);
            s.fa = -wa * spec.amplitude * std::sin(wa * a) * std::cos(wb * b);
            s.fb = -wb * spec.amplitude * std::cos(wa * a) * std::sin(wb * b);
            break;
        }
    }
    return s;
}

SurfacePoint surface_point(const SurfaceSpec& spec, double a, double b) {
    const SurfaceSample s = surface_height(spec, a, b);
    const Lattice& lat = spec.lat;
    SurfacePoint p;
    const Vec2 xt = a * lat.v1 + b * lat.v2;
    p.x = Vec3(xt.x(), xt.y(), s.f);
    // Cartesian gradient of f: chain rule through a = v1s.xt, b = v2s.xt.
    const Vec2 grad = s.fa * lat.v1s + s.fb * lat.v2s;
    const double root = std::sqrt(1.0 + grad.squaredNorm());
    p.normal = Vec3(-grad.x(), -grad.y(), 1.0) / root;
    p.jacobian = lat.D * root;
    return p;
}

SurfaceGrid build_grid(const SurfaceSpec& spec, int N, int M) {
    if (N < 4 || M < 4 || N % 2 != 0 || M % 2 != 0) {
        throw ResolutionError("build_grid: N and M must be even and at least 4");
    }
    SurfaceGrid g;
    g.N = N;
    g.M = M;
    g.spec = spec;
    g.nodes.resize(static_cast<size_t>(N) * M);
    g.normals.resize(static_cast<size_t>(N) * M);
    g.jacobians.resize(static_cast<size_t>(N) * M);
    g.z_plus = -std::numeric_limits<double>::infinity();
    g.z_minus = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < M; ++j) {
            const SurfacePoint p = surface_point(spec, static_cast<double>(i) / N,
                                                 static_cast<double>(j) / M);
            const int idx = g.index(i, j);
            g.nodes[static_cast<size_t>(idx)] = p.x;
            g.normals[static_cast<size_t>(idx)] = p.normal;
            g.jacobians[static_cast<size_t>(idx)] = p.jacobian;
            g.z_plus = std::max(g.z_plus, p.x.z());
            g.z_minus = std::min(g.z_minus, p.x.z());
        }
    }
    return g;
}

}  // namespace qpscat
