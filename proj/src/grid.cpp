#include "gapguide/grid.hpp"

namespace gapguide {

GridSpec centered_grid(int dim, std::array<int, 3> n, Vec3 h, Vec3 center) {
    GridSpec g;
    g.dim = dim;
    for (int a = 0; a < 3; ++a) {
        g.n[a] = a < dim ? n[a] : 1;
        g.h[a] = a < dim ? h[a] : 1.0;
        g.origin[a] = a < dim ? center[a] - 0.5 * g.n[a] * g.h[a] : 0.0;
    }
    return g;
}

SampleLattice cell_centers(const GridSpec& g) {
    SampleLattice s;
    s.dim = g.dim;
    s.n = g.n;
    s.h = g.h;
    for (int a = 0; a < 3; ++a) s.origin[a] = g.origin[a] + 0.5 * g.h[a];
    return s;
}

}  // namespace gapguide
