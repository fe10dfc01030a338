#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Core>

namespace gapguide {

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

/// Uniform cell grid in 1–3 dimensions. Samples live at cell centers;
/// linear index is row-major with the last axis fastest.
struct GridSpec {
    int dim = 2;
    std::array<int, 3> n{1, 1, 1};
    Vec3 h{1.0, 1.0, 1.0};
    Vec3 origin{0.0, 0.0, 0.0};

    [[nodiscard]] std::size_t cells() const {
        std::size_t c = 1;
        for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n[a]);
        return c;
    }
    [[nodiscard]] double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= h[a];
        return v;
    }
    [[nodiscard]] double center(int axis, int i) const { return origin[axis] + (i + 0.5) * h[axis]; }
    [[nodiscard]] double extent(int axis) const { return n[axis] * h[axis]; }
    [[nodiscard]] std::size_t index(int i, int j = 0, int k = 0) const {
        if (dim == 1) return static_cast<std::size_t>(i);
        if (dim == 2) return static_cast<std::size_t>(i) * n[1] + j;
        return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
    }
};

/// Builds a grid of `n` cells per axis with spacing `h`, centered on `center`.
GridSpec centered_grid(int dim, std::array<int, 3> n, Vec3 h, Vec3 center = {0.0, 0.0, 0.0});

/// Regular lattice of sample points (cell centers, Yee edges, nodes ...).
/// Sample (i,j,k) sits at origin + (i,j,k)*h.
struct SampleLattice {
    int dim = 2;
    std::array<int, 3> n{1, 1, 1};
    Vec3 h{1.0, 1.0, 1.0};
    Vec3 origin{0.0, 0.0, 0.0};

    [[nodiscard]] std::size_t size() const {
        std::size_t c = 1;
        for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n[a]);
        return c;
    }
    [[nodiscard]] double weight() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= h[a];
        return v;
    }
    [[nodiscard]] double position(int axis, int i) const { return origin[axis] + i * h[axis]; }
};

/// Lattice of the cell centers of `g`.
SampleLattice cell_centers(const GridSpec& g);

}  // namespace gapguide
