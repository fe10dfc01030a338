#include "gapguide/xsection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "gapguide/errors.hpp"

namespace gapguide {

namespace {

using SparseR = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double>;

constexpr int kPad = 3;

struct Direction {
    int di, dj;
    double scale;  // step length / h
};

NodeGrid make_nodes(const CrossSection& cs, double h) {
    const Box2 b = cs.bounds();
    NodeGrid g;
    g.h = h;
    g.origin = {b.lo[0] - kPad * h, cs.dim() == 1 ? 0.0 : b.lo[1] - kPad * h};
    g.nx = static_cast<int>(std::ceil((b.hi[0] - b.lo[0]) / h - 1e-9)) + 2 * kPad + 1;
    g.ny = cs.dim() == 1 ? 1 : static_cast<int>(std::ceil((b.hi[1] - b.lo[1]) / h - 1e-9)) + 2 * kPad + 1;
    g.id.assign(static_cast<std::size_t>(g.nx) * g.ny, -1);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (cs.boundary_distance(g.position(i, j)) > 0.5 * h) {
                g.id[static_cast<std::size_t>(i) * g.ny + j] = static_cast<int>(g.nodes.size());
                g.nodes.emplace_back(i, j);
            }
    return g;
}

// Unknown run through a node along one direction: unknowns at offsets
// −km..kp, boundary crossings at −bm and +bp (units of the step length).
struct Run {
    int km = 0, kp = 0;
    double bm = 0.0, bp = 0.0;
};

Run line_run(const CrossSection& cs, const NodeGrid& g, int i, int j, const Direction& d) {
    Run r;
    const double len = d.scale * g.h;
    auto side = [&](int sgn, int& k, double& b) {
        k = 0;
        while (g.at(i + sgn * (k + 1) * d.di, j + sgn * (k + 1) * d.dj) >= 0) ++k;
        const Vec2 last = g.position(i + sgn * k * d.di, j + sgn * k * d.dj);
        const Vec2 dir{sgn * d.di * g.h / len, sgn * d.dj * g.h / len};
        b = k + cs.exit_distance(last, dir) / len;
    };
    side(+1, r.kp, r.bp);
    side(-1, r.km, r.bm);
    return r;
}

// Weights expressing the polynomial extension at offset `off` (outside the
// run) in terms of the nearest run unknowns; boundary rows impose p = 0 and,
// when clamped, p' = 0.
std::vector<std::pair<int, double>> closure(const Run& r, int off, int order, bool clamped) {
    const int len = r.kp + r.km + 1;
    const int count = std::min(order, len);
    std::vector<int> nodes;
    std::vector<double> bcs;
    if (off > r.kp) {
        for (int q = 0; q < count; ++q) nodes.push_back(r.kp - q);
        bcs.push_back(r.bp);
        if (count < 2) bcs.push_back(-r.bm);
    } else {
        for (int q = 0; q < count; ++q) nodes.push_back(-r.km + q);
        bcs.push_back(-r.bm);
        if (count < 2) bcs.push_back(r.bp);
    }
    const int per_bc = clamped ? 2 : 1;
    const int m = static_cast<int>(nodes.size()) + per_bc * static_cast<int>(bcs.size());
    Eigen::MatrixXd v(m, m);
    int row = 0;
    for (int s : nodes) {
        for (int p = 0; p < m; ++p) v(row, p) = std::pow(static_cast<double>(s), p);
        ++row;
    }
    for (double b : bcs) {
        for (int p = 0; p < m; ++p) v(row, p) = std::pow(b, p);
        ++row;
        if (clamped) {
            for (int p = 0; p < m; ++p) v(row, p) = p == 0 ? 0.0 : p * std::pow(b, p - 1);
            ++row;
        }
    }
    Eigen::VectorXd t(m);
    for (int p = 0; p < m; ++p) t[p] = std::pow(static_cast<double>(off), p);
    const Eigen::VectorXd w = v.transpose().fullPivLu().solve(t);
    std::vector<std::pair<int, double>> out;
    for (std::size_t q = 0; q < nodes.size(); ++q) out.emplace_back(nodes[q], w[static_cast<Eigen::Index>(q)]);
    return out;
}

// Adds Σ_off c[off]·u(off)·scale to row `r` along one line, with closures.
void add_line(std::vector<Triplet>& trip, const NodeGrid& g, int r, int i, int j, const Direction& d, const Run& run,
              const std::vector<double>& coeff, double scale, bool clamped) {
    const int half = static_cast<int>(coeff.size()) / 2;
    for (int off = -half; off <= half; ++off) {
        const double c = coeff[static_cast<std::size_t>(off + half)] * scale;
        if (off >= -run.km && off <= run.kp) {
            trip.emplace_back(r, g.at(i + off * d.di, j + off * d.dj), c);
            continue;
        }
        for (auto [s, w] : closure(run, off, 2, clamped)) trip.emplace_back(r, g.at(i + s * d.di, j + s * d.dj), c * w);
    }
}

struct Eig {
    double value = 0.0;
    Eigen::VectorXd vec;
    int iterations = 0;
    double residual = 0.0;
};

Eig inverse_iteration(const SparseR& a, const SparseR& b, double tol, int max_iter) {
    Eigen::SparseLU<SparseR, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw IterationError("buckling factorization failed", 0.0);
    const Eigen::Index n = a.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    for (Eigen::Index q = 0; q < n; ++q) x[q] += 0.1 * std::sin(1.7 * static_cast<double>(q));
    x.normalize();
    Eig e;
    double prev = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd y = lu.solve(b * x);
        const double yy = y.squaredNorm();
        if (!(yy > 0.0)) throw IterationError("inverse iteration collapsed", 0.0);
        e.value = y.dot(x) / yy;
        x = y / std::sqrt(yy);
        e.iterations = it;
        if (it > 2 && std::abs(e.value - prev) <= tol * std::abs(e.value)) break;
        prev = e.value;
    }
    const Eigen::VectorXd ax = a * x;
    e.residual = (ax - e.value * (b * x)).norm() / ax.norm();
    if (e.iterations >= max_iter && e.residual > std::sqrt(tol))
        throw IterationError("inverse iteration did not converge", e.residual);
    e.vec = x;
    return e;
}

Eig dense_solve(const SparseR& a, const SparseR& b) {
    const Eigen::MatrixXd ad(a), bd(b);
    const Eigen::MatrixXd m = ad.partialPivLu().solve(bd);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
    Eigen::Index best = 0;
    for (Eigen::Index q = 1; q < m.rows(); ++q)
        if (es.eigenvalues()[q].real() > es.eigenvalues()[best].real()) best = q;
    Eig e;
    e.value = 1.0 / es.eigenvalues()[best].real();
    e.vec = es.eigenvectors().col(best).real();
    e.vec.normalize();
    const Eigen::VectorXd ax = a * e.vec;
    e.residual = (ax - e.value * (b * e.vec)).norm() / ax.norm();
    return e;
}

void normalize_sign(Eigen::VectorXd& x) {
    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    x /= x[imax];
}

void check_resolution(const CrossSection& cs, double h) {
    if (!(h > 0.0)) throw ValidationError("grid spacing must be positive");
    if (cs.diameter() / h < 32.0 - 1e-9)
        throw ResolutionError("need at least 32 cells across the cross-section diameter");
}

}  // namespace

double smoothstep5(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

NuSolution solve_nu_vector_full(const CrossSection& cs, double h, const NuOptions& opt) {
    if (cs.dim() != 2) throw GeometryError("vector constant needs a planar cross-section");
    if (!cs.simply_connected()) throw GeometryError("unsupported geometry: cross-section is not simply connected");
    check_resolution(cs, h);
    NuSolution sol;
    sol.grid = make_nodes(cs, h);
    const NodeGrid& g = sol.grid;
    const int n = static_cast<int>(g.nodes.size());
    if (n == 0) throw ResolutionError("no interior nodes");

    const std::vector<Direction> dirs{{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, std::sqrt(2.0)}, {1, -1, std::sqrt(2.0)}};
    const std::vector<double> c4{1.0, -4.0, 6.0, -4.0, 1.0};
    const std::vector<double> c2{-1.0, 2.0, -1.0};
    std::vector<Triplet> ta, tb;
    ta.reserve(static_cast<std::size_t>(n) * 40);
    tb.reserve(static_cast<std::size_t>(n) * 12);
    for (int r = 0; r < n; ++r) {
        const auto [i, j] = g.nodes[static_cast<std::size_t>(r)];
        for (const Direction& d : dirs) {
            const Run run = line_run(cs, g, i, j, d);
            const double hs = d.scale * h;
            add_line(ta, g, r, i, j, d, run, c4, (2.0 / 3.0) / std::pow(hs, 4), true);
            if (d.scale == 1.0) add_line(tb, g, r, i, j, d, run, c2, 1.0 / (hs * hs), true);
        }
    }
    SparseR a(n, n), b(n, n);
    a.setFromTriplets(ta.begin(), ta.end());
    b.setFromTriplets(tb.begin(), tb.end());

    Eig e = (opt.dense && n <= 10000) ? dense_solve(a, b) : inverse_iteration(a, b, opt.tol, opt.max_iter);
    normalize_sign(e.vec);
    sol.stream = e.vec;
    NuEstimate& est = sol.estimate;
    est.value = e.value;
    est.grid_h = h;
    est.unknowns = n;
    est.iterations = e.iterations;
    est.residual = e.residual;
    if (!(est.value > 0.0)) throw IterationError("nonpositive buckling eigenvalue", e.residual);

    // −Δψ − νψ on nodes well inside Ω.
    const Eigen::VectorXd q = b * sol.stream - est.value * sol.stream;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int r = 0; r < n; ++r) {
        const auto [i, j] = g.nodes[static_cast<std::size_t>(r)];
        if (cs.boundary_distance(g.position(i, j)) < 3.0 * h) continue;
        lo = std::min(lo, q[r]);
        hi = std::max(hi, q[r]);
    }
    sol.euler_lagrange_spread = hi >= lo ? (hi - lo) / (est.value * sol.stream.cwiseAbs().maxCoeff()) : 0.0;
    est.achieved_quotient = make_test_field(sol, cs, 0.0).quotient;
    return sol;
}

NuEstimate solve_nu_vector(const CrossSection& cs, double h, double tol) {
    NuOptions opt;
    opt.tol = tol;
    return solve_nu_vector_full(cs, h, opt).estimate;
}

NuEstimate solve_nu_scalar(const CrossSection& cs, double h, double tol) {
    if (cs.dim() == 2 && !cs.simply_connected())
        throw GeometryError("unsupported geometry: cross-section is not simply connected");
    check_resolution(cs, h);
    const NodeGrid g = make_nodes(cs, h);
    const int n = static_cast<int>(g.nodes.size());
    if (n == 0) throw ResolutionError("no interior nodes");
    std::vector<Direction> dirs{{1, 0, 1.0}};
    if (cs.dim() == 2) dirs.push_back({0, 1, 1.0});
    const std::vector<double> c2{-1.0, 2.0, -1.0};
    std::vector<Triplet> ta;
    for (int r = 0; r < n; ++r) {
        const auto [i, j] = g.nodes[static_cast<std::size_t>(r)];
        for (const Direction& d : dirs) add_line(ta, g, r, i, j, d, line_run(cs, g, i, j, d), c2, 1.0 / (h * h), false);
    }
    SparseR a(n, n), b(n, n);
    a.setFromTriplets(ta.begin(), ta.end());
    b.setIdentity();
    const Eig e = inverse_iteration(a, b, tol, 5000);
    NuEstimate est;
    est.value = e.value;
    est.grid_h = h;
    est.unknowns = n;
    est.iterations = e.iterations;
    est.residual = e.residual;
    est.achieved_quotient = e.value;
    if (!(est.value > 0.0)) throw IterationError("nonpositive Dirichlet eigenvalue", e.residual);
    return est;
}

NuEstimate refine_extrapolate(const std::vector<std::pair<double, double>>& estimates) {
    if (estimates.size() < 3) throw ValidationError("extrapolation needs at least three estimates");
    auto seq = estimates;
    std::sort(seq.begin(), seq.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    const std::size_t m = seq.size();
    const auto [h0, v0] = seq[m - 3];
    const auto [h1, v1] = seq[m - 2];
    const auto [h2, v2] = seq[m - 1];
    if (!(h2 > 0.0) || !(h1 > h2)) throw ValidationError("estimates need distinct positive spacings");
    const double ratio = h1 / h2;
    if (std::abs(h0 / h1 - ratio) > 1e-6 * ratio) throw ValidationError("spacings must decrease geometrically");

    NuEstimate out;
    out.grid_h = h2;
    const double d01 = v0 - v1, d12 = v1 - v2;
    const bool monotone = (d01 > 0.0 && d12 > 0.0) || (d01 < 0.0 && d12 < 0.0) || (d01 == 0.0 && d12 == 0.0);
    if (!monotone) {
        out.value = v2;
        out.warning = "extrapolation unsafe: non-monotone sequence, finest value returned";
        return out;
    }
    out.order = d12 == 0.0 ? std::numeric_limits<double>::infinity() : std::log(d01 / d12) / std::log(ratio);
    out.value = v2 + (v2 - v1) / (ratio * ratio - 1.0);
    out.extrapolated = true;
    return out;
}

TestField make_test_field(const NuSolution& sol, const CrossSection& cs, double rho) {
    const NodeGrid& g = sol.grid;
    const double h = g.h;
    if (rho < 0.0) throw ValidationError("support margin must be nonnegative");
    if (rho > 0.0 && !(rho < 0.5 * cs.inradius())) throw GeometryError("support margin too large: field would vanish");

    TestField tf;
    tf.h = h;
    tf.rho = rho;
    tf.node_lattice = {2, {g.nx, g.ny, 1}, {h, h, 1.0}, {g.origin[0], g.origin[1], 0.0}};
    tf.gx_lattice = {2, {g.nx, g.ny - 1, 1}, {h, h, 1.0}, {g.origin[0], g.origin[1] + 0.5 * h, 0.0}};
    tf.gy_lattice = {2, {g.nx - 1, g.ny, 1}, {h, h, 1.0}, {g.origin[0] + 0.5 * h, g.origin[1], 0.0}};

    const int nx = g.nx, ny = g.ny;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nx) * ny);
    tf.support_margin = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < g.nodes.size(); ++r) {
        const auto [i, j] = g.nodes[r];
        const double d = cs.boundary_distance(g.position(i, j));
        const double eta = rho > 0.0 ? smoothstep5((d - rho) / rho) : 1.0;
        const double v = eta * sol.stream[static_cast<Eigen::Index>(r)];
        f[static_cast<Eigen::Index>(i) * ny + j] = v;
        if (v != 0.0) tf.support_margin = std::min(tf.support_margin, d);
    }
    auto F = [&](int i, int j) { return f[static_cast<Eigen::Index>(i) * ny + j]; };

    tf.gx.resize(static_cast<Eigen::Index>(nx) * (ny - 1));
    tf.gy.resize(static_cast<Eigen::Index>(nx - 1) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) tf.gx[static_cast<Eigen::Index>(i) * (ny - 1) + j] = (F(i, j + 1) - F(i, j)) / h;
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j < ny; ++j) tf.gy[static_cast<Eigen::Index>(i) * ny + j] = -(F(i + 1, j) - F(i, j)) / h;

    const double norm = h * std::sqrt(tf.gx.squaredNorm() + tf.gy.squaredNorm());
    if (!(norm > 0.0)) throw GeometryError("test field vanishes");
    tf.gx /= norm;
    tf.gy /= norm;
    tf.stream = f / norm;

    // 5-point Laplacian and forward-difference gradient per component (zero outside).
    auto component = [&](const Eigen::VectorXd& u, int mx, int my, double& lap2, double& inner, double& grad2) {
        auto U = [&](int i, int j) {
            return (i < 0 || j < 0 || i >= mx || j >= my) ? 0.0 : u[static_cast<Eigen::Index>(i) * my + j];
        };
        for (int i = -1; i < mx; ++i)
            for (int j = -1; j < my; ++j) {
                const double c = U(i, j);
                grad2 += std::pow(U(i + 1, j) - c, 2) + std::pow(U(i, j + 1) - c, 2);
                if (i < 0 || j < 0) continue;
                const double l = (U(i + 1, j) + U(i - 1, j) + U(i, j + 1) + U(i, j - 1) - 4.0 * c) / (h * h);
                lap2 += l * l * h * h;
                inner += l * c * h * h;
            }
    };
    double lap2 = 0.0, inner = 0.0, grad2 = 0.0;
    component(tf.gx, nx, ny - 1, lap2, inner, grad2);
    component(tf.gy, nx - 1, ny, lap2, inner, grad2);
    tf.lap_norm2 = lap2;
    tf.lap_inner = inner;
    tf.grad_norm2 = grad2;
    tf.quotient = std::sqrt(lap2);

    double gmax = std::max(tf.gx.cwiseAbs().maxCoeff(), tf.gy.cwiseAbs().maxCoeff());
    double dmax = 0.0;
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            const double div = (tf.gx[static_cast<Eigen::Index>(i + 1) * (ny - 1) + j] -
                                tf.gx[static_cast<Eigen::Index>(i) * (ny - 1) + j]) +
                               (tf.gy[static_cast<Eigen::Index>(i) * ny + j + 1] - tf.gy[static_cast<Eigen::Index>(i) * ny + j]);
            dmax = std::max(dmax, std::abs(div));
        }
    tf.max_divergence = dmax / gmax;
    return tf;
}

TestField make_test_field(const CrossSection& cs, double rho, double h) {
    if (rho > 0.0 && !(rho < 0.5 * cs.inradius())) throw GeometryError("support margin too large: field would vanish");
    return make_test_field(solve_nu_vector_full(cs, h), cs, rho);
}

}  // namespace gapguide
