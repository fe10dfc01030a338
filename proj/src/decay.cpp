#include "gapguide/decay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gapguide/errors.hpp"

namespace gapguide {

std::size_t FieldLayout::size() const {
    std::size_t s = 0;
    for (const auto& c : components) s += c.size();
    return s;
}

FieldLayout scalar_layout(const SampledEpsilon& eps) {
    FieldLayout f;
    f.components.push_back(cell_centers(eps.grid));
    f.axial_period = eps.grid.extent(0);
    return f;
}

FieldLayout maxwell_layout(const MaxwellOperator& op) {
    FieldLayout f;
    for (int c = 0; c < 3; ++c) f.components.push_back(op.component_lattice(c));
    f.axial_period = op.bc()[0].is_wall() ? 0.0 : op.grid().extent(0);
    return f;
}

DecayProfile profile(const ModeResult& mode, const FieldLayout& layout, const GridSpec& grid, const StripSpec& strip,
                     const Vec2& ray, const ProfileOptions& opt) {
    if (!(opt.step > 0.0) || !(opt.half_side > 0.0)) throw ValidationError("profile needs step > 0 and half_side > 0");
    if (static_cast<std::size_t>(mode.field.size()) != layout.size())
        throw ValidationError("mode field does not match its layout");
    const int dim = grid.dim;
    if (dim < 2) throw ValidationError("profiles need a 2D or 3D grid");
    const int ntrans = dim - 1;
    double rn = std::hypot(ray[0], ntrans > 1 ? ray[1] : 0.0);
    if (!(rn > 0.0)) throw ValidationError("ray direction must be nonzero");
    const Vec2 dir{ray[0] / rn, ntrans > 1 ? ray[1] / rn : 0.0};

    const CrossSection cs = strip.scaled();
    const Vec2 c = cs.center();
    const double t0 = cs.exit_distance(c, dir);

    DecayProfile p;
    p.half_side = opt.half_side;
    p.ray = dir;
    p.d_min = cs.inradius();
    p.lambda = mode.lambda;
    p.k1 = mode.k1;
    const double mid0 = grid.origin[0] + 0.5 * grid.extent(0);
    Vec3 wrap{layout.axial_period, 0.0, 0.0};

    for (int m = 0;; ++m) {
        const double t = t0 + m * opt.step;
        const Vec2 xt{c[0] + t * dir[0], c[1] + t * dir[1]};
        bool fits = true;
        double frac = 0.0;
        for (int a = 0; a < ntrans; ++a) {
            const double half = 0.5 * grid.extent(a + 1);
            const double off = std::abs(xt[a] - (grid.origin[a + 1] + half));
            if (off + opt.half_side > half + 1e-12) fits = false;
            frac = std::max(frac, off / half);
        }
        if (!fits) {
            p.truncated = true;
            break;
        }
        CubeWindow w;
        w.center = {mid0, xt[0], ntrans > 1 ? xt[1] : 0.0};
        w.half_side = opt.half_side;
        double s2 = 0.0;
        std::size_t offset = 0;
        for (const SampleLattice& lat : layout.components) {
            const Eigen::Index sz = static_cast<Eigen::Index>(lat.size());
            s2 += window_norm_squared(lat, mode.field.segment(static_cast<Eigen::Index>(offset), sz), w, wrap);
            offset += lat.size();
        }
        DecaySample s;
        s.dist = cs.distance_to(xt);
        s.norm = std::sqrt(s2);
        const bool inner = frac <= 1.0 - opt.outer_fraction + 1e-12;
        if (inner) p.guard = s.dist;
        s.in_window = inner && s.dist >= p.d_min - 1e-12;
        if (!p.samples.empty() && !(s.dist > p.samples.back().dist)) continue;
        p.samples.push_back(s);
    }
    return p;
}

DecayFit fit_decay(const DecayProfile& p) {
    DecayFit f;
    f.truncation_guard = p.guard;
    std::vector<double> x, y;
    for (const auto& s : p.samples) {
        if (!s.in_window) continue;
        if (!(s.norm > 0.0)) {
            ++f.excluded;
            continue;
        }
        x.push_back(s.dist);
        y.push_back(std::log(s.norm));
    }
    f.used = static_cast<int>(x.size());
    if (f.used < 5) throw ValidationError("decay fit needs at least 5 usable samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    f.slope = sxy / sxx;
    const double icpt = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ssr += std::pow(y[i] - (icpt + f.slope * x[i]), 2);
    f.r2 = syy <= 1e-28 * n ? 1.0 : 1.0 - ssr / syy;
    f.rate = std::max(0.0, -f.slope);
    f.prefactor = std::exp(icpt);
    f.d_min = *std::min_element(x.begin(), x.end());
    f.d_max = *std::max_element(x.begin(), x.end());
    return f;
}

DecayFit combine_fits(const std::vector<DecayFit>& fits) {
    if (fits.empty()) throw ValidationError("no fits to combine");
    DecayFit out = fits.front();
    double rate = 0.0, slope = 0.0;
    for (const auto& f : fits) {
        rate += f.rate;
        slope += f.slope;
        out.r2 = std::min(out.r2, f.r2);
        out.d_min = std::min(out.d_min, f.d_min);
        out.d_max = std::max(out.d_max, f.d_max);
        out.truncation_guard = std::min(out.truncation_guard, f.truncation_guard);
    }
    out.used = 0;
    out.excluded = 0;
    for (const auto& f : fits) {
        out.used += f.used;
        out.excluded += f.excluded;
    }
    out.rate = rate / static_cast<double>(fits.size());
    out.slope = slope / static_cast<double>(fits.size());
    return out;
}

double ct_shape(double lambda, const GapInterval& gap) {
    gap.validate();
    if (lambda < gap.alpha || lambda > gap.beta) throw DomainError("lambda outside the gap");
    return std::sqrt(std::max(0.0, (lambda - gap.alpha) * (gap.beta - lambda)));
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t q = i; q <= j; ++q) r[idx[q]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("spearman needs two equal-length samples (n >= 2)");
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace gapguide
