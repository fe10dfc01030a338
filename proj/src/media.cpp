#include "gapguide/media.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapguide/errors.hpp"

namespace gapguide {

namespace {

Inclusion::Shape shape_from_string(const std::string& s) {
    if (s == "ball" || s == "disk" || s == "sphere") return Inclusion::Shape::Ball;
    if (s == "box" || s == "rect") return Inclusion::Shape::Box;
    if (s == "layer") return Inclusion::Shape::Layer;
    if (s == "rod") return Inclusion::Shape::Rod;
    throw ValidationError("unknown inclusion shape '" + s + "'");
}

std::string shape_to_string(Inclusion::Shape s) {
    switch (s) {
        case Inclusion::Shape::Ball: return "ball";
        case Inclusion::Shape::Box: return "box";
        case Inclusion::Shape::Layer: return "layer";
        case Inclusion::Shape::Rod: return "rod";
    }
    return "ball";
}

// Membership of a point already reduced into the unit cell; `d` is the offset
// (image shift) applied to the point.
bool inside_shape(const Inclusion& inc, int dim, const Vec3& y) {
    switch (inc.shape) {
        case Inclusion::Shape::Ball: {
            double r2 = 0.0;
            for (int a = 0; a < dim; ++a) r2 += (y[a] - inc.center[a]) * (y[a] - inc.center[a]);
            return r2 < inc.radius * inc.radius;
        }
        case Inclusion::Shape::Box:
            for (int a = 0; a < dim; ++a)
                if (!(std::abs(y[a] - inc.center[a]) < inc.half[a])) return false;
            return true;
        case Inclusion::Shape::Layer: return y[inc.axis] >= inc.lo && y[inc.axis] < inc.hi;
        case Inclusion::Shape::Rod: {
            double r2 = 0.0;
            for (int a = 0; a < dim; ++a)
                if (a != inc.axis) r2 += (y[a] - inc.center[a]) * (y[a] - inc.center[a]);
            return r2 < inc.radius * inc.radius;
        }
    }
    return false;
}

}  // namespace

double Inclusion::min_feature() const {
    switch (shape) {
        case Shape::Ball:
        case Shape::Rod: return 2.0 * radius;
        case Shape::Box: {
            double m = std::numeric_limits<double>::infinity();
            for (double v : half)
                if (v > 0.0) m = std::min(m, 2.0 * v);
            return m;
        }
        case Shape::Layer: return hi - lo;
    }
    return 0.0;
}

nlohmann::json Inclusion::to_json() const {
    nlohmann::json j;
    j["shape"] = shape_to_string(shape);
    j["eps"] = eps;
    switch (shape) {
        case Shape::Ball: j["center"] = center; j["radius"] = radius; break;
        case Shape::Box: j["center"] = center; j["half"] = half; break;
        case Shape::Layer: j["axis"] = axis; j["lo"] = lo; j["hi"] = hi; break;
        case Shape::Rod: j["center"] = center; j["radius"] = radius; j["axis"] = axis; break;
    }
    return j;
}

Inclusion Inclusion::from_json(const nlohmann::json& j) {
    Inclusion inc;
    inc.shape = shape_from_string(j.at("shape").get<std::string>());
    inc.eps = j.at("eps").get<double>();
    auto vec3 = [&](const char* key) {
        Vec3 v{0.0, 0.0, 0.0};
        if (!j.contains(key)) return v;
        const auto arr = j.at(key).get<std::vector<double>>();
        if (arr.size() > 3) throw ValidationError(std::string("too many components in '") + key + "'");
        std::copy(arr.begin(), arr.end(), v.begin());
        return v;
    };
    inc.center = vec3("center");
    inc.half = vec3("half");
    inc.radius = j.value("radius", 0.0);
    inc.axis = j.value("axis", 0);
    inc.lo = j.value("lo", 0.0);
    inc.hi = j.value("hi", 0.0);
    return inc;
}

void StripSpec::validate() const {
    if (!(l > 0.0)) throw ValidationError("strip scale l must be positive");
    if (!(eps_inside > 0.0) || !std::isfinite(eps_inside)) throw ValidationError("strip ε must be positive and finite");
    if (axis != 0) throw ValidationError("strip axis must be x1 (axis 0)");
}

nlohmann::json StripSpec::to_json() const {
    return {{"axis", axis}, {"cross_section", cross_section.to_json()}, {"l", l}, {"eps", eps_inside}};
}

StripSpec StripSpec::from_json(const nlohmann::json& j) {
    StripSpec s;
    s.axis = j.value("axis", 0);
    s.cross_section = CrossSection::from_json(j.at("cross_section"));
    s.l = j.at("l").get<double>();
    s.eps_inside = j.at("eps").get<double>();
    s.validate();
    return s;
}

double MediumSpec::eps_at(const Vec3& x) const {
    double value = background;
    for (const auto& inc : inclusions) {
        Vec3 y{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) y[a] = x[a] - std::floor(x[a] / period[a]) * period[a];
        // test the reduced point and its neighbouring images
        bool hit = false;
        const int images = dim == 1 ? 3 : (dim == 2 ? 9 : 27);
        for (int m = 0; m < images && !hit; ++m) {
            Vec3 z = y;
            int code = m;
            for (int a = 0; a < dim; ++a) {
                z[a] += (code % 3 - 1) * period[a];
                code /= 3;
            }
            hit = inside_shape(inc, dim, z);
        }
        if (hit) value = inc.eps;
    }
    return value;
}

double MediumSpec::c0() const {
    double v = background;
    for (const auto& inc : inclusions) v = std::min(v, inc.eps);
    if (defect) v = std::min(v, defect->eps_inside);
    return v;
}

double MediumSpec::c1() const {
    double v = background;
    for (const auto& inc : inclusions) v = std::max(v, inc.eps);
    if (defect) v = std::max(v, defect->eps_inside);
    return v;
}

void MediumSpec::validate() const {
    if (dim < 1 || dim > 3) throw ValidationError("medium dimension must be 1, 2 or 3");
    for (int a = 0; a < dim; ++a)
        if (!(period[a] > 0.0)) throw ValidationError("lattice periods must be positive");
    auto check_eps = [](double e) {
        if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("dielectric values must lie in (0, inf)");
    };
    check_eps(background);
    for (const auto& inc : inclusions) {
        check_eps(inc.eps);
        if (!(inc.min_feature() > 0.0)) throw ValidationError("inclusion has non-positive size");
        if (inc.axis < 0 || inc.axis >= dim) throw ValidationError("inclusion axis out of range");
        if (inc.shape == Inclusion::Shape::Layer) {
            if (inc.lo < 0.0 || inc.hi > period[inc.axis])
                throw ValidationError("layer must lie within one unit cell");
        } else if (inc.shape == Inclusion::Shape::Box) {
            for (int a = 0; a < dim; ++a)
                if (2.0 * inc.half[a] > period[a] + 1e-12)
                    throw ValidationError("box inclusion larger than the unit cell");
        } else {
            for (int a = 0; a < dim; ++a)
                if (!(inc.shape == Inclusion::Shape::Rod && a == inc.axis) && 2.0 * inc.radius > period[a] + 1e-12)
                    throw ValidationError("round inclusion larger than the unit cell");
        }
    }
    if (defect) defect->validate();
}

nlohmann::json MediumSpec::to_json() const {
    nlohmann::json j;
    std::vector<std::vector<double>> lattice;
    for (int a = 0; a < dim; ++a) {
        std::vector<double> v(dim, 0.0);
        v[a] = period[a];
        lattice.push_back(v);
    }
    j["dim"] = dim;
    j["lattice"] = lattice;
    j["background"] = background;
    j["inclusions"] = nlohmann::json::array();
    for (const auto& inc : inclusions) j["inclusions"].push_back(inc.to_json());
    if (defect) j["defect"] = defect->to_json();
    return j;
}

MediumSpec MediumSpec::from_json(const nlohmann::json& j) {
    MediumSpec m;
    const auto lattice = j.at("lattice").get<std::vector<std::vector<double>>>();
    m.dim = static_cast<int>(lattice.size());
    if (m.dim < 1 || m.dim > 3) throw ValidationError("lattice must have 1 to 3 vectors");
    if (j.contains("dim") && j.at("dim").get<int>() != m.dim)
        throw ValidationError("'dim' disagrees with the number of lattice vectors");
    for (int a = 0; a < m.dim; ++a) {
        if (static_cast<int>(lattice[a].size()) != m.dim) throw ValidationError("lattice vector has wrong length");
        for (int b = 0; b < m.dim; ++b)
            if (b != a && lattice[a][b] != 0.0)
                throw ValidationError("only axis-aligned lattices are supported");
        m.period[a] = lattice[a][a];
    }
    m.background = j.at("background").get<double>();
    if (j.contains("inclusions"))
        for (const auto& ij : j.at("inclusions")) m.inclusions.push_back(Inclusion::from_json(ij));
    if (j.contains("defect") && !j.at("defect").is_null()) m.defect = StripSpec::from_json(j.at("defect"));
    m.validate();
    return m;
}

SampledEpsilon build_medium(const MediumSpec& spec, const GridSpec& grid) {
    spec.validate();
    if (grid.dim != spec.dim) throw ValidationError("grid and medium dimensions differ");
    for (const auto& inc : spec.inclusions) {
        double hmax = 0.0;
        for (int a = 0; a < spec.dim; ++a) {
            if (inc.shape == Inclusion::Shape::Layer && a != inc.axis) continue;
            if (inc.shape == Inclusion::Shape::Rod && a == inc.axis) continue;
            hmax = std::max(hmax, grid.h[a]);
        }
        if (inc.min_feature() < 4.0 * hmax * (1.0 - 1e-12))
            throw ResolutionError("inclusion of size " + std::to_string(inc.min_feature()) +
                                  " is resolved by fewer than 4 cells");
    }
    SampledEpsilon out;
    out.grid = grid;
    out.values.resize(static_cast<Eigen::Index>(grid.cells()));
    out.bloch_period = spec.period[0];
    const int n0 = grid.n[0], n1 = grid.dim > 1 ? grid.n[1] : 1, n2 = grid.dim > 2 ? grid.n[2] : 1;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            for (int k = 0; k < n2; ++k) {
                const Vec3 x{grid.center(0, i), grid.dim > 1 ? grid.center(1, j) : 0.0,
                             grid.dim > 2 ? grid.center(2, k) : 0.0};
                out.values[static_cast<Eigen::Index>(grid.index(i, j, k))] = spec.eps_at(x);
            }
    out.c0 = out.values.minCoeff();
    out.c1 = out.values.maxCoeff();
    return out;
}

SampledEpsilon with_defect(const SampledEpsilon& eps0, const StripSpec& strip) {
    strip.validate();
    const GridSpec& g = eps0.grid;
    if (g.dim < 2) throw GeometryError("a strip needs at least one transverse axis");
    const int tdim = g.dim - 1;
    if (strip.cross_section.dim() != tdim)
        throw GeometryError("cross-section dimension does not match the transverse grid");
    const Box2 b = strip.scaled().bounds();
    for (int t = 0; t < tdim; ++t) {
        const double lo = g.origin[t + 1], hi = g.origin[t + 1] + g.extent(t + 1);
        if (b.lo[t] < lo - 1e-12 || b.hi[t] > hi + 1e-12)
            throw GeometryError("strip cross-section exceeds the transverse grid extent");
    }
    SampledEpsilon out = eps0;
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.dim > 2 ? g.n[2] : 1;
    for (int j = 0; j < n1; ++j)
        for (int k = 0; k < n2; ++k) {
            const Vec2 xt{g.center(1, j), g.dim > 2 ? g.center(2, k) : 0.0};
            if (!strip.contains(xt)) continue;
            for (int i = 0; i < n0; ++i) out.values[static_cast<Eigen::Index>(g.index(i, j, k))] = strip.eps_inside;
        }
    out.c0 = out.values.minCoeff();
    out.c1 = out.values.maxCoeff();
    out.strip = strip;
    return out;
}

double window_norm_squared(const SampleLattice& lat, const Eigen::VectorXcd& values, const CubeWindow& w,
                           const Vec3& wrap, bool* any) {
    if (static_cast<std::size_t>(values.size()) != lat.size())
        throw ValidationError("field size does not match its sample lattice");
    constexpr double tol = 1e-12;
    // Per-axis multiplicity of each sample index inside the window.
    std::array<std::vector<double>, 3> mult;
    for (int a = 0; a < 3; ++a) {
        const int n = a < lat.dim ? lat.n[a] : 1;
        mult[a].assign(static_cast<std::size_t>(n), a < lat.dim ? 0.0 : 1.0);
        if (a >= lat.dim) continue;
        for (int i = 0; i < n; ++i) {
            const double x = lat.position(a, i);
            const double lo = w.center[a] - w.half_side, hi = w.center[a] + w.half_side;
            if (wrap[a] > 0.0) {
                const double L = wrap[a];
                const double mlo = std::ceil((lo - x) / L - tol), mhi = std::floor((hi - x) / L + tol);
                mult[a][i] = std::max(0.0, mhi - mlo + 1.0);
            } else {
                mult[a][i] = (x >= lo - tol && x <= hi + tol) ? 1.0 : 0.0;
            }
        }
    }
    const int n0 = lat.n[0], n1 = lat.dim > 1 ? lat.n[1] : 1, n2 = lat.dim > 2 ? lat.n[2] : 1;
    double sum = 0.0;
    bool hit = false;
    for (int i = 0; i < n0; ++i) {
        if (mult[0][i] == 0.0) continue;
        for (int j = 0; j < n1; ++j) {
            const double m01 = mult[0][i] * mult[1][j];
            if (m01 == 0.0) continue;
            for (int k = 0; k < n2; ++k) {
                const double m = m01 * mult[2][k];
                if (m == 0.0) continue;
                hit = true;
                sum += m * std::norm(values[(static_cast<Eigen::Index>(i) * n1 + j) * n2 + k]);
            }
        }
    }
    if (any) *any = hit;
    return sum * lat.weight();
}

WindowNorm window_norm(const SampleLattice& lattice, const Eigen::VectorXcd& values, const CubeWindow& w,
                       const Vec3& wrap) {
    if (!(w.half_side > 0.0)) throw ValidationError("window half side must be positive");
    bool any = false;
    const double s = window_norm_squared(lattice, values, w, wrap, &any);
    return {std::sqrt(s), !any};
}

}  // namespace gapguide
