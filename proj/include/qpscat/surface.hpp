#pragma once

#include <vector>

#include "qpscat/lattice.hpp"

namespace qpscat {

enum class SurfaceKind { flat, cosine_product, custom_harmonic };

// Biperiodic graph surface z = f(xt). The built-in profiles are defined in
// lattice coordinates (a, b) with xt = a v1 + b v2, so they are periodic for
// any lattice; on the unit lattice cosine_product is
// f(x, y) = amplitude cos(2 pi x) cos(2 pi y).
struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::flat;
    double amplitude = 0.0;
    Lattice lat;
    // custom_harmonic only: f = amplitude cos(2 pi ja a) cos(2 pi jb b).
    int harmonic_a = 1;
    int harmonic_b = 1;
};

// Height and its analytic lattice-coordinate derivatives at (a, b).
struct SurfaceSample {
    double f = 0.0;
    double fa = 0.0;
    double fb = 0.0;
};

SurfaceSample surface_height(const SurfaceSpec& spec, double a, double b);

// Tensor-product Nystrom grid over one period: nodes at a_i = i/N, b_j = j/M,
// upward unit normals, and area elements |t_a x t_b| per unit (a, b).
struct SurfaceGrid {
    int N = 0, M = 0;
    SurfaceSpec spec;
    std::vector<Vec3> nodes;      // row-major, index i * M + j
    std::vector<Vec3> normals;    // unit, positive z component
    std::vector<double> jacobians;
    double z_plus = 0.0;
    double z_minus = 0.0;

    int size() const { return N * M; }
    int index(int i, int j) const { return i * M + j; }
};

// Throws ResolutionError for N or M below 4 or odd.
SurfaceGrid build_grid(const SurfaceSpec& spec, int N, int M);

// Surface point and metric at arbitrary lattice coordinates (used by the
// local polar quadrature between grid nodes).
struct SurfacePoint {
    Vec3 x;
    Vec3 normal;
    double jacobian = 0.0;
};

SurfacePoint surface_point(const SurfaceSpec& spec, double a, double b);

}  // namespace qpscat
