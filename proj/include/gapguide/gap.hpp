#pragma once

#include "gapguide/errors.hpp"

namespace gapguide {

/// Spectral gap (α, β) of the background operator, 0 < α < β < ∞.
struct GapInterval {
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const {
        if (!(alpha > 0.0) || !(beta > alpha) || !(beta < 1e300))
            throw ValidationError("gap must satisfy 0 < alpha < beta < inf");
    }
    [[nodiscard]] double width() const { return beta - alpha; }
    [[nodiscard]] double mid() const { return 0.5 * (alpha + beta); }
    [[nodiscard]] bool contains(double lambda) const { return lambda > alpha && lambda < beta; }
};

}  // namespace gapguide
