#include "gapguide/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "gapguide/errors.hpp"
#include "gapguide/krylov.hpp"

namespace gapguide {

namespace {

using Lu = Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>>;

SparseC shifted(const SparseC& a, double sigma) {
    SparseC id(a.rows(), a.cols());
    id.setIdentity();
    SparseC m = a - cplx(sigma, 0.0) * id;
    m.makeCompressed();
    return m;
}

// Rayleigh–Ritz of A on span(X) (X orthonormal); returns eigenpairs with true residuals.
std::vector<ModeResult> ritz(const SparseC& a, const Eigen::MatrixXcd& x) {
    const Eigen::MatrixXcd ax = a * x;
    Eigen::MatrixXcd h = x.adjoint() * ax;
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    std::vector<ModeResult> out;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        ModeResult m;
        m.lambda = es.eigenvalues()[c];
        m.field = x * es.eigenvectors().col(c);
        const Eigen::VectorXcd r = ax * es.eigenvectors().col(c) - m.lambda * m.field;
        m.residual = r.norm() / m.field.norm();
        out.push_back(std::move(m));
    }
    return out;
}

struct SliceContext {
    const HermitianOperator& op;
    const SparseC& a;
    const InteriorOptions& opt;
    InteriorStats stats;
    int counter = 0;
};

// Eigenpairs nearest σ (`count` of them, or fewer if the operator is smaller).
std::vector<ModeResult> nearest(SliceContext& ctx, double sigma) {
    const Eigen::Index n = ctx.a.rows();
    KrylovOptions ko;
    ko.nev = static_cast<int>(std::min<Eigen::Index>(ctx.opt.count, n));
    ko.block = ctx.opt.block;
    ko.tol = ctx.opt.tol;
    ko.max_restarts = ctx.opt.max_restarts;
    ko.seed = ctx.opt.seed + 7919ULL * static_cast<std::uint64_t>(ctx.counter++);
    KrylovResult kr;
    if (ctx.opt.method == InteriorOptions::Method::ShiftInvert) {
        Lu lu;
        lu.compute(shifted(ctx.a, sigma));
        if (lu.info() != Eigen::Success) throw IterationError("sparse factorization failed at shift " + std::to_string(sigma), 0.0);
        ko.which = KrylovOptions::Which::LargestMagnitude;
        kr = krylov_schur([&](const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) { y = lu.solve(x); }, n, ko);
    } else {
        const SparseC m = shifted(ctx.a, sigma);
        ko.which = KrylovOptions::Which::SmallestAlgebraic;
        // Squaring clusters the wanted end of the spectrum; a short basis stagnates.
        ko.max_basis = static_cast<int>(std::min<Eigen::Index>(n, 8 * (ko.nev + ko.block)));
        kr = krylov_schur([&](const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) { y = m * (m * x); }, n, ko);
    }
    ctx.stats.applications += kr.applications;
    ++ctx.stats.slices;
    if (!kr.converged) {
        throw IterationError("interior eigensolver stagnated near " + std::to_string(sigma),
                             kr.residuals.size() ? kr.residuals.maxCoeff() : 0.0);
    }
    return ritz(ctx.a, kr.vectors);
}

void slice(SliceContext& ctx, double lo, double hi, bool closed_hi, int depth, std::vector<ModeResult>& out) {
    const double sigma = 0.5 * (lo + hi);
    const double radius = 0.5 * (hi - lo);
    std::vector<ModeResult> modes = nearest(ctx, sigma);
    double far = 0.0;
    for (const auto& m : modes) far = std::max(far, std::abs(m.lambda - sigma));
    const bool exhausted = static_cast<Eigen::Index>(modes.size()) >= ctx.a.rows();
    if (far > radius * (1.0 + 1e-12) || exhausted || depth >= ctx.opt.max_depth) {
        if (!(far > radius) && !exhausted) ctx.stats.complete = false;
        for (auto& m : modes) {
            if (m.lambda >= lo && (m.lambda < hi || (closed_hi && m.lambda <= hi))) out.push_back(std::move(m));
        }
        return;
    }
    slice(ctx, lo, sigma, false, depth + 1, out);
    slice(ctx, sigma, hi, closed_hi, depth + 1, out);
}

double divergence_diag(const MaxwellOperator& op, const Eigen::VectorXcd& u) {
    const double hmin = std::min({op.grid().h[0], op.grid().h[1], op.grid().h[2]});
    const double gnorm = 2.0 * std::sqrt(3.0) / hmin;
    const double un = u.norm();
    if (un == 0.0) return 0.0;
    return (op.gradient().adjoint() * u).norm() / (gnorm * un);
}

}  // namespace

std::vector<ModeResult> interior_eigs(const HermitianOperator& op, double lo, double hi, const InteriorOptions& opt,
                                      InteriorStats* stats) {
    if (!(lo >= 0.0) || !(hi > lo)) throw ValidationError("interior window must satisfy 0 <= lo < hi");
    if (opt.count < 1 || opt.block < 1) throw ValidationError("interior options need count >= 1 and block >= 1");
    const SparseC a = op.matrix();
    SliceContext ctx{op, a, opt, {}, 0};
    std::vector<ModeResult> out;
    slice(ctx, lo, hi, true, 0, out);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
    if (stats) *stats = ctx.stats;
    return out;
}

std::vector<ModeResult> lowest_eigs(const HermitianOperator& op, int count, const InteriorOptions& opt) {
    if (count < 1) throw ValidationError("lowest_eigs needs count >= 1");
    const SparseC a = op.matrix();
    InteriorOptions o = opt;
    o.count = count;
    o.method = InteriorOptions::Method::ShiftInvert;
    SliceContext ctx{op, a, o, {}, 0};
    std::vector<ModeResult> modes = nearest(ctx, -1.0);
    std::sort(modes.begin(), modes.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
    return modes;
}

BandTable band_structure(const SampledEpsilon& medium, const std::vector<Vec3>& k_path, int bands,
                         const InteriorOptions& opt) {
    if (medium.strip) throw ValidationError("band_structure needs a periodic medium without defect");
    if (bands < 1) throw ValidationError("band count must be positive");
    if (medium.grid.dim != 2 && medium.grid.dim != 3) throw ValidationError("band_structure supports 2D and 3D media");
    BandTable bt;
    bt.grid = medium.grid;
    bt.k = k_path;
    bt.bands.resize(k_path.size());
    bt.residuals.resize(k_path.size());
    for (std::size_t i = 0; i < k_path.size(); ++i) {
        const Vec3& k = k_path[i];
        std::vector<ModeResult> modes;
        if (medium.grid.dim == 2) {
            ScalarOperator op(medium, {AxisBC::bloch(k[0]), AxisBC::bloch(k[1])});
            modes = lowest_eigs(op, bands, opt);
        } else {
            MaxwellOperator op(medium, {AxisBC::bloch(k[0]), AxisBC::bloch(k[1]), AxisBC::bloch(k[2])});
            op.set_penalty(4.0 / medium.c0);
            const double scale = norm_estimate(op);
            for (ModeResult& m : lowest_eigs(op, 2 * bands + 6, opt)) {
                m.divergence = divergence_diag(op, m.field);
                if (m.divergence > 1e-6 || m.lambda < 1e-9 * scale) continue;
                modes.push_back(std::move(m));
            }
            if (static_cast<int>(modes.size()) < bands)
                throw IterationError("too few transverse bands at k-sample " + std::to_string(i), 0.0);
            modes.resize(static_cast<std::size_t>(bands));
        }
        for (int b = 0; b < bands; ++b) {
            bt.bands[i].push_back(std::max(0.0, modes[static_cast<std::size_t>(b)].lambda));
            bt.residuals[i].push_back(modes[static_cast<std::size_t>(b)].residual);
        }
    }
    return bt;
}

std::vector<Vec3> irreducible_path(Vec3 period, int dim, int per_segment) {
    if (per_segment < 1) throw ValidationError("per_segment must be positive");
    const double pi = std::numbers::pi;
    std::vector<Vec3> corners;
    const Vec3 g{0.0, 0.0, 0.0};
    if (dim == 2) {
        corners = {g, {pi / period[0], 0.0, 0.0}, {pi / period[0], pi / period[1], 0.0}, g};
    } else if (dim == 3) {
        corners = {g, {pi / period[0], 0.0, 0.0}, {pi / period[0], pi / period[1], 0.0},
                   {pi / period[0], pi / period[1], pi / period[2]}, g};
    } else {
        throw ValidationError("irreducible path needs dim 2 or 3");
    }
    std::vector<Vec3> path;
    for (std::size_t s = 0; s + 1 < corners.size(); ++s) {
        for (int i = 0; i < per_segment; ++i) {
            const double t = static_cast<double>(i) / per_segment;
            Vec3 k{};
            for (int a = 0; a < 3; ++a) k[a] = (1.0 - t) * corners[s][a] + t * corners[s + 1][a];
            path.push_back(k);
        }
    }
    path.push_back(corners.back());
    return path;
}

GapList find_gaps(const BandTable& bt, double min_width) {
    GapList gl;
    gl.k_samples = static_cast<int>(bt.k.size());
    gl.caveat = "band edges taken over " + std::to_string(gl.k_samples) +
                " k-samples; extrema between samples can only narrow the reported gaps";
    if (bt.bands.empty()) return gl;
    std::vector<std::pair<double, double>> ranges;
    std::size_t nb = bt.bands.front().size();
    for (const auto& b : bt.bands) nb = std::min(nb, b.size());
    for (std::size_t b = 0; b < nb; ++b) {
        double lo = bt.bands[0][b], hi = lo;
        for (const auto& row : bt.bands) {
            lo = std::min(lo, row[b]);
            hi = std::max(hi, row[b]);
        }
        ranges.emplace_back(lo, hi);
    }
    std::sort(ranges.begin(), ranges.end());
    double reach = ranges.front().second;
    for (std::size_t i = 1; i < ranges.size(); ++i) {
        if (ranges[i].first > reach) {
            GapInterval g{reach, ranges[i].first};
            if (g.alpha > 0.0 && g.width() >= min_width) gl.gaps.push_back(g);
        }
        reach = std::max(reach, ranges[i].second);
    }
    return gl;
}

DefectSpectrum defect_spectrum(const SampledEpsilon& medium, const GapInterval& gap, const std::vector<double>& k1_samples,
                               double delta, const std::vector<double>& mu_points, Transverse transverse,
                               const InteriorOptions& opt) {
    gap.validate();
    if (!(delta > 0.0)) throw ValidationError("delta must be positive");
    if (k1_samples.empty()) throw ValidationError("need at least one k1 sample");
    const int dim = medium.grid.dim;
    if (dim != 2 && dim != 3) throw ValidationError("defect_spectrum supports 2D and 3D media");
    const AxisBC tb = transverse == Transverse::Wall ? AxisBC::wall() : AxisBC::bloch(0.0);

    const std::size_t nk = k1_samples.size();
    std::vector<std::vector<ModeResult>> per_k(nk);
    std::vector<InteriorStats> per_stats(nk);
    std::vector<std::exception_ptr> errors(nk);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < nk; ++i) {
        try {
            const double k1 = k1_samples[i];
            if (dim == 2) {
                ScalarOperator op(medium, {AxisBC::bloch(k1), tb}, Exec::Serial);
                per_k[i] = interior_eigs(op, gap.alpha, gap.beta, opt, &per_stats[i]);
            } else {
                MaxwellOperator op(medium, {AxisBC::bloch(k1), tb, tb}, Exec::Serial);
                per_k[i] = interior_eigs(op, gap.alpha, gap.beta, opt, &per_stats[i]);
                for (auto& m : per_k[i]) m.divergence = divergence_diag(op, m.field);
            }
            for (auto& m : per_k[i]) m.k1 = k1;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    DefectSpectrum ds;
    for (std::size_t i = 0; i < nk; ++i) {
        ds.stats.slices += per_stats[i].slices;
        ds.stats.applications += per_stats[i].applications;
        ds.stats.complete = ds.stats.complete && per_stats[i].complete;
        for (auto& m : per_k[i]) ds.modes.push_back(std::move(m));
    }
    std::stable_sort(ds.modes.begin(), ds.modes.end(),
                     [](const auto& x, const auto& y) { return x.k1 < y.k1 || (x.k1 == y.k1 && x.lambda < y.lambda); });
    ds.all_covered = !mu_points.empty();
    for (double mu : mu_points) {
        MuCheck c;
        c.mu = mu;
        c.nearest = std::numeric_limits<double>::infinity();
        for (const auto& m : ds.modes) c.nearest = std::min(c.nearest, std::abs(m.lambda - mu));
        c.covered = c.nearest < delta;
        ds.all_covered = ds.all_covered && c.covered;
        ds.mu.push_back(c);
    }
    return ds;
}

std::vector<double> uniform_mu(const GapInterval& gap, int count) {
    gap.validate();
    if (count < 1) throw ValidationError("mu count must be positive");
    std::vector<double> mu;
    for (int i = 1; i <= count; ++i) mu.push_back(gap.alpha + i * gap.width() / (count + 1));
    return mu;
}

std::vector<double> uniform_k1(double period, int count) {
    if (!(period > 0.0) || count < 1) throw ValidationError("k1 sampling needs period > 0 and count >= 1");
    std::vector<double> k;
    if (count == 1) return {0.0};
    for (int i = 0; i < count; ++i) k.push_back(i * std::numbers::pi / period / (count - 1));
    return k;
}

}  // namespace gapguide
