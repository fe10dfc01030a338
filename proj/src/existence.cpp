#include "gapguide/existence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "gapguide/errors.hpp"

namespace gapguide {

namespace {

double S(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double S1(double u) { return 30.0 * u * u * (u - 1.0) * (u - 1.0); }
double S2(double u) { return 60.0 * u * (1.0 - 3.0 * u + 2.0 * u * u); }

constexpr int kGauss = 20;

}  // namespace

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw ValidationError("Gauss-Legendre order must be positive");
    const auto n = static_cast<unsigned>(order);
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (unsigned i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double p = std::legendre(n, x);
            const double pm = n > 0 ? std::legendre(n - 1, x) : 0.0;
            dp = n * (x * p - pm) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double p = std::legendre(n, x), pm = std::legendre(n - 1, x);
        dp = n * (x * p - pm) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

Bump::Bump() {
    std::vector<double> x, w;
    gauss_legendre(kGauss, x, w);
    c_ = 1.0;
    double n2 = 0.0;
    for (int q = 0; q < kGauss; ++q) n2 += w[q] * value(x[q]) * value(x[q]);
    c_ = 1.0 / std::sqrt(n2);
    for (int q = 0; q < kGauss; ++q) {
        const double v = value(x[q]), a = d1(x[q]), b = d2(x[q]);
        norm2_ += w[q] * v * v;
        d1_norm2_ += w[q] * a * a;
        d2_norm2_ += w[q] * b * b;
        d2_inner_ += w[q] * b * v;
    }
}

double Bump::value(double t) const {
    if (std::abs(t) >= 1.0) return 0.0;
    return c_ * S(1.0 - t * t);
}

double Bump::d1(double t) const {
    if (std::abs(t) >= 1.0) return 0.0;
    return c_ * S1(1.0 - t * t) * (-2.0 * t);
}

double Bump::d2(double t) const {
    if (std::abs(t) >= 1.0) return 0.0;
    const double u = 1.0 - t * t;
    return c_ * (S2(u) * 4.0 * t * t - 2.0 * S1(u));
}

void TrialParams::validate(const std::optional<GapInterval>& gap) const {
    if (!(l > 0.0) || !(eps > 0.0)) throw ValidationError("trial parameters need l > 0 and eps > 0");
    if (!(mu > 0.0)) throw ValidationError("trial parameters need mu > 0");
    if (!(delta > 0.0)) throw ValidationError("trial parameters need delta > 0");
    if (!(n >= 1.0)) throw ValidationError("trial parameters need n >= 1");
    if (!g) throw ValidationError("trial parameters need a test field");
    const double gn2 = g->h * g->h * (g->gx.squaredNorm() + g->gy.squaredNorm());
    if (std::abs(gn2 - 1.0) > 1e-10) throw ValidationError("test field is not normalized");
    if (std::abs(psi.norm2() - 1.0) > 1e-12) throw ValidationError("profile is not normalized");
    if (!(g->support_margin > 0.0)) throw ValidationError("test field support touches the boundary");
    if (gap) {
        gap->validate();
        if (mu - delta < gap->alpha || mu + delta > gap->beta)
            throw ValidationError("(mu - delta, mu + delta) must lie inside the gap");
    }
}

ConditionResult check_condition(double l, double eps, const GapInterval& gap, double nu) {
    gap.validate();
    if (!(l > 0.0) || !(eps >= 0.0) || !(nu > 0.0)) throw ValidationError("condition needs l > 0, eps >= 0, nu > 0");
    ConditionResult c;
    c.lhs = l * l * gap.width() * eps;
    c.rhs = 2.0 * nu;
    c.margin = c.lhs - c.rhs;
    c.satisfied = c.lhs > c.rhs;
    c.delta_star = eps > 0.0 ? nu / (l * l * eps) : std::numeric_limits<double>::infinity();
    return c;
}

DeltaCondition check_delta_condition(double l, double eps, double delta, double nu) {
    if (!(l > 0.0) || !(eps >= 0.0) || !(delta > 0.0) || !(nu > 0.0))
        throw ValidationError("delta condition needs l > 0, eps >= 0, delta > 0, nu > 0");
    DeltaCondition c;
    c.lhs = l * l * delta * eps;
    c.rhs = nu;
    c.margin = c.lhs - c.rhs;
    c.satisfied = c.lhs > c.rhs;
    return c;
}

ResidualReport residual_closed_form(const TrialParams& tp) {
    tp.validate();
    const TestField& g = *tp.g;
    const Bump& p = tp.psi;
    const double n2 = tp.n * tp.n, l2 = tp.l * tp.l, k2 = tp.mu * tp.eps;
    ResidualReport r;
    r.terms[0] = p.d2_norm2() / (n2 * n2);
    r.terms[1] = 4.0 * k2 * p.d1_norm2() / n2;
    r.terms[2] = g.lap_norm2 / (l2 * l2);
    r.terms[3] = 2.0 * p.d2_inner() * g.lap_inner / (n2 * l2);
    r.closed_form = r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3];
    r.threshold = tp.delta * tp.delta * tp.eps * tp.eps;
    r.passes = r.closed_form < r.threshold;
    r.psi_identity = std::abs(p.d2_inner() + p.d1_norm2()) / p.d1_norm2();
    r.g_identity = std::abs(g.lap_inner + g.grad_norm2) / g.grad_norm2;
    return r;
}

namespace {

struct Slices {
    double h1 = 0.0;
    std::vector<cplx> s, ds, d2s;  // s = ψ_n e^{ikx₁} and its sixth-order differences
};

Slices axial(const TrialParams& tp, int slices) {
    if (slices < 16) throw ValidationError("need at least 16 axial slices");
    constexpr int ext = 3;
    Slices a;
    a.h1 = 2.0 * tp.n / slices;
    const double k = tp.k();
    std::vector<cplx> v(static_cast<std::size_t>(slices + 2 * ext));
    for (int m = -ext; m < slices + ext; ++m) {
        const double x = -tp.n + (m + 0.5) * a.h1;
        v[static_cast<std::size_t>(m + ext)] = tp.psi.value_n(x, tp.n) * std::polar(1.0, k * x);
    }
    static constexpr double c1[] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
    static constexpr double c2[] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    a.s.resize(static_cast<std::size_t>(slices));
    a.ds.resize(a.s.size());
    a.d2s.resize(a.s.size());
    for (int m = 0; m < slices; ++m) {
        cplx d1 = 0.0, d2 = 0.0;
        for (int q = -3; q <= 3; ++q) {
            const cplx u = v[static_cast<std::size_t>(m + ext + q)];
            d1 += c1[q + 3] * u;
            d2 += c2[q + 3] * u;
        }
        a.s[static_cast<std::size_t>(m)] = v[static_cast<std::size_t>(m + ext)];
        a.ds[static_cast<std::size_t>(m)] = d1 / a.h1;
        a.d2s[static_cast<std::size_t>(m)] = d2 / (a.h1 * a.h1);
    }
    return a;
}

}  // namespace

double residual_quadrature(const TrialParams& tp, int slices) {
    tp.validate();
    const TestField& g = *tp.g;
    const int nx = g.node_lattice.n[0], ny = g.node_lattice.n[1];
    const double hp = tp.l * g.h;     // transverse spacing of g_l
    const double amp = 1.0 / tp.l;    // g_l = g(x′/l)/l
    auto GX = [&](int i, int j) {
        return (i < 0 || j < 0 || i >= nx || j >= ny - 1) ? 0.0 : amp * g.gx[static_cast<Eigen::Index>(i) * (ny - 1) + j];
    };
    auto GY = [&](int i, int j) {
        return (i < 0 || j < 0 || i >= nx - 1 || j >= ny) ? 0.0 : amp * g.gy[static_cast<Eigen::Index>(i) * ny + j];
    };
    // Nodal scalar curl c = ∂₂g₃ − ∂₃g₂, then curl′c, and the cell divergence.
    std::vector<double> c(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            c[static_cast<std::size_t>(i) * ny + j] = (GY(i, j) - GY(i - 1, j)) / hp - (GX(i, j) - GX(i, j - 1)) / hp;
    auto C = [&](int i, int j) { return (i < 0 || j < 0 || i >= nx || j >= ny) ? 0.0 : c[static_cast<std::size_t>(i) * ny + j]; };
    const std::size_t nxg = static_cast<std::size_t>(nx) * (ny - 1), nyg = static_cast<std::size_t>(nx - 1) * ny;
    std::vector<double> gx(nxg), gy(nyg), ccx(nxg), ccy(nyg);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            const std::size_t q = static_cast<std::size_t>(i) * (ny - 1) + j;
            gx[q] = GX(i, j);
            ccx[q] = (C(i, j + 1) - C(i, j)) / hp;
        }
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const std::size_t q = static_cast<std::size_t>(i) * ny + j;
            gy[q] = GY(i, j);
            ccy[q] = -(C(i + 1, j) - C(i, j)) / hp;
        }
    std::vector<double> div(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int i = -1; i < nx; ++i)
        for (int j = -1; j < ny; ++j)
            div[static_cast<std::size_t>(i + 1) * (ny + 1) + j + 1] =
                (GX(i + 1, j) - GX(i, j)) / hp + (GY(i, j + 1) - GY(i, j)) / hp;

    const Slices ax = axial(tp, slices);
    const double k2 = tp.mu * tp.eps;
    std::vector<double> per(static_cast<std::size_t>(slices), 0.0);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < slices; ++m) {
        const cplx s = ax.s[static_cast<std::size_t>(m)];
        const cplx a = -ax.d2s[static_cast<std::size_t>(m)] - k2 * s;
        const cplx ds = ax.ds[static_cast<std::size_t>(m)];
        double acc = 0.0;
        for (std::size_t q = 0; q < nxg; ++q) acc += std::norm(a * gx[q] + s * ccx[q]);
        for (std::size_t q = 0; q < nyg; ++q) acc += std::norm(a * gy[q] + s * ccy[q]);
        for (double d : div) acc += std::norm(ds * d);
        per[static_cast<std::size_t>(m)] = acc;
    }
    double total = 0.0;
    for (double v : per) total += v;
    return total * ax.h1 * hp * hp;
}

double trial_norm2(const TrialParams& tp, int slices) {
    tp.validate();
    const Slices ax = axial(tp, slices);
    double s2 = 0.0;
    for (const cplx& s : ax.s) s2 += std::norm(s);
    const TestField& g = *tp.g;
    const double hp = tp.l * g.h;
    const double g2 = (g.gx.squaredNorm() + g.gy.squaredNorm()) * hp * hp / (tp.l * tp.l);
    return s2 * ax.h1 * g2;
}

MinimalN minimal_n(TrialParams tp) {
    tp.n = 1.0;
    tp.validate();
    MinimalN out;
    const ResidualReport r1 = residual_closed_form(tp);
    out.floor = r1.terms[2];
    out.threshold = r1.threshold;
    if (!(out.floor < out.threshold)) return out;
    auto f = [&](long n) {
        tp.n = static_cast<double>(n);
        return residual_closed_form(tp).closed_form;
    };
    long hi = 1;
    while (!(f(hi) < out.threshold)) {
        if (hi > (1L << 52)) return out;
        hi *= 2;
    }
    long lo = hi / 2;  // f(lo) ≥ threshold unless hi == 1
    if (hi > 1) {
        while (hi - lo > 1) {
            const long mid = lo + (hi - lo) / 2;
            if (f(mid) < out.threshold)
                hi = mid;
            else
                lo = mid;
        }
    }
    out.reachable = true;
    out.n = hi;
    out.residual = f(hi);
    return out;
}

}  // namespace gapguide
