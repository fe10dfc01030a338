#include "gapguide/discrete_op.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gapguide/errors.hpp"

namespace gapguide {

namespace {

cplx bloch_factor(const AxisBC& bc, double length) {
    if (bc.is_wall()) return {1.0, 0.0};
    return std::polar(1.0, bc.k * length);
}

using Triplet = Eigen::Triplet<cplx, int>;

}  // namespace

Eigen::VectorXcd random_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = nd(rng);
        const double im = nd(rng);
        v[i] = cplx(re, im);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Scalar operator

ScalarOperator::ScalarOperator(const SampledEpsilon& eps, std::array<AxisBC, 2> bc, Exec exec)
    : grid_(eps.grid), bc_(bc), exec_(exec) {
    if (grid_.dim != 2) throw ValidationError("scalar operator needs a 2D grid");
    const int n0 = grid_.n[0], n1 = grid_.n[1];
    const double ih0 = 1.0 / (grid_.h[0] * grid_.h[0]), ih1 = 1.0 / (grid_.h[1] * grid_.h[1]);
    st_.n0 = n0;
    st_.n1 = n1;
    st_.wrap0 = !bc[0].is_wall();
    st_.wrap1 = !bc[1].is_wall();
    st_.ph0 = bloch_factor(bc[0], grid_.extent(0));
    st_.ph1 = bloch_factor(bc[1], grid_.extent(1));
    const std::size_t N = grid_.cells();
    st_.fx.assign(N, 0.0);
    st_.fy.assign(N, 0.0);
    st_.diag.assign(N, 0.0);
    auto e = [&](int i, int j) { return eps.values[static_cast<Eigen::Index>(grid_.index(i, j))]; };
    auto inv = [&](int i, int j) { return 1.0 / e(i, j); };
    // Flux-continuous face coefficient (series resistance of the two half cells).
    auto face = [&](int i, int j, int i2, int j2) { return 2.0 / (e(i, j) + e(i2, j2)); };
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const std::size_t r = grid_.index(i, j);
            if (i + 1 < n0 || st_.wrap0) st_.fx[r] = face(i, j, (i + 1) % n0, j) * ih0;
            if (j + 1 < n1 || st_.wrap1) st_.fy[r] = face(i, j, i, (j + 1) % n1) * ih1;
        }
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const std::size_t r = grid_.index(i, j);
            double d = 0.0;
            d += (i + 1 < n0 || st_.wrap0) ? st_.fx[r] : 2.0 * inv(i, j) * ih0;
            d += (i > 0) ? st_.fx[grid_.index(i - 1, j)] : (st_.wrap0 ? st_.fx[grid_.index(n0 - 1, j)] : 2.0 * inv(i, j) * ih0);
            d += (j + 1 < n1 || st_.wrap1) ? st_.fy[r] : 2.0 * inv(i, j) * ih1;
            d += (j > 0) ? st_.fy[grid_.index(i, j - 1)] : (st_.wrap1 ? st_.fy[grid_.index(i, n1 - 1)] : 2.0 * inv(i, j) * ih1);
            st_.diag[r] = d;
        }
}

void ScalarOperator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    if (x.size() != size()) throw ValidationError("scalar field has the wrong size");
    y.resize(size());
    if (exec_ == Exec::Parallel)
        kernels::scalar_apply_parallel(st_, x.data(), y.data());
    else
        kernels::scalar_apply_serial(st_, x.data(), y.data());
}

ScalarField2 ScalarOperator::apply(const ScalarField2& u) const {
    if (u.grid.n != grid_.n || u.grid.dim != 2) throw ValidationError("scalar field shape mismatch");
    ScalarField2 out{grid_, {}, u.bloch_k1};
    apply(u.values, out.values);
    return out;
}

SparseC ScalarOperator::matrix() const {
    const int n0 = st_.n0, n1 = st_.n1;
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(5) * n0 * n1);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const int r = static_cast<int>(grid_.index(i, j));
            t.emplace_back(r, r, st_.diag[r]);
            if (i + 1 < n0) t.emplace_back(r, r + n1, -st_.fx[r]);
            else if (st_.wrap0) t.emplace_back(r, j, -st_.fx[r] * st_.ph0);
            if (i > 0) t.emplace_back(r, r - n1, -st_.fx[r - n1]);
            else if (st_.wrap0) t.emplace_back(r, (n0 - 1) * n1 + j, -st_.fx[(n0 - 1) * n1 + j] * std::conj(st_.ph0));
            if (j + 1 < n1) t.emplace_back(r, r + 1, -st_.fy[r]);
            else if (st_.wrap1) t.emplace_back(r, r - (n1 - 1), -st_.fy[r] * st_.ph1);
            if (j > 0) t.emplace_back(r, r - 1, -st_.fy[r - 1]);
            else if (st_.wrap1) t.emplace_back(r, r + n1 - 1, -st_.fy[r + n1 - 1] * std::conj(st_.ph1));
        }
    SparseC m(size(), size());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// ---------------------------------------------------------------------------
// Maxwell operator

MaxwellOperator::MaxwellOperator(const SampledEpsilon& eps, std::array<AxisBC, 3> bc, Exec exec)
    : grid_(eps.grid), bc_(bc), exec_(exec) {
    if (grid_.dim != 3) throw ValidationError("Maxwell operator needs a 3D grid");
    std::array<bool, 3> wall{};
    std::array<cplx, 3> ph{};
    for (int a = 0; a < 3; ++a) {
        wall[a] = bc[a].is_wall();
        ph[a] = bloch_factor(bc[a], grid_.extent(a));
        if (!wall[a] && grid_.n[a] < 2) throw ValidationError("Bloch axes need at least 2 cells");
    }
    st_ = kernels::make_yee_layout(grid_.n, grid_.h, wall, ph);

    const auto& n = grid_.n;
    auto inv = [&](int i, int j, int k) { return 1.0 / eps.values[static_cast<Eigen::Index>(grid_.index(i, j, k))]; };
    for (int c = 0; c < 3; ++c) {
        const auto& hs = st_.h_shape[c];
        for (int i0 = 0; i0 < hs.n[0]; ++i0)
            for (int i1 = 0; i1 < hs.n[1]; ++i1)
                for (int i2 = 0; i2 < hs.n[2]; ++i2) {
                    std::array<int, 3> m{i0, i1, i2};
                    const int node = m[c];
                    double sum = 0.0;
                    int cnt = 0;
                    for (int side : {node - 1, node}) {
                        int cell = side;
                        if (cell < 0 || cell >= n[c]) {
                            if (wall[c]) continue;
                            cell = (cell + n[c]) % n[c];
                        }
                        std::array<int, 3> q = m;
                        q[c] = cell;
                        sum += inv(q[0], q[1], q[2]);
                        ++cnt;
                    }
                    st_.face_inv_eps[static_cast<std::size_t>(st_.h_offset[c] + hs.idx(i0, i1, i2))] = sum / cnt;
                }
    }

    // Gradient: nodes → edges.
    kernels::Shape3 ns;
    for (int a = 0; a < 3; ++a) ns.n[a] = wall[a] ? n[a] + 1 : n[a];
    std::vector<Triplet> t;
    auto node_is_wall = [&](const std::array<int, 3>& m) {
        for (int a = 0; a < 3; ++a)
            if (wall[a] && (m[a] == 0 || m[a] == n[a])) return true;
        return false;
    };
    for (int c = 0; c < 3; ++c) {
        const auto& es = st_.e_shape[c];
        for (int i0 = 0; i0 < es.n[0]; ++i0)
            for (int i1 = 0; i1 < es.n[1]; ++i1)
                for (int i2 = 0; i2 < es.n[2]; ++i2) {
                    const int row = static_cast<int>(st_.e_offset[c] + es.idx(i0, i1, i2));
                    std::array<int, 3> lo{i0, i1, i2}, hi = lo;
                    cplx phase{1.0, 0.0};
                    hi[c] += 1;
                    if (hi[c] == ns.n[c]) {
                        hi[c] = 0;
                        phase = ph[c];
                    }
                    if (!node_is_wall(hi)) t.emplace_back(row, static_cast<int>(ns.idx(hi[0], hi[1], hi[2])), phase / grid_.h[c]);
                    if (!node_is_wall(lo)) t.emplace_back(row, static_cast<int>(ns.idx(lo[0], lo[1], lo[2])), -1.0 / grid_.h[c]);
                }
    }
    grad_.resize(st_.e_size, ns.size());
    grad_.setFromTriplets(t.begin(), t.end());
}

void MaxwellOperator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    if (x.size() != size()) throw ValidationError("Yee field has the wrong size");
    y.resize(size());
    Eigen::VectorXcd scratch(st_.h_size);
    if (exec_ == Exec::Parallel)
        kernels::maxwell_apply_parallel(st_, x.data(), y.data(), scratch.data());
    else
        kernels::maxwell_apply_serial(st_, x.data(), y.data(), scratch.data());
    if (penalty_ != 0.0) {
        const Eigen::VectorXcd div = grad_.adjoint() * x;
        y.noalias() += penalty_ * (grad_ * div);
    }
}

YeeField3 MaxwellOperator::apply(const YeeField3& u) const {
    if (u.grid.n != grid_.n || u.grid.dim != 3) throw ValidationError("Yee field shape mismatch");
    YeeField3 out{grid_, bc_, {}};
    apply(u.values, out.values);
    return out;
}

Eigen::VectorXcd MaxwellOperator::curl(const Eigen::VectorXcd& e) const {
    if (e.size() != size()) throw ValidationError("Yee field has the wrong size");
    Eigen::VectorXcd masked(size()), hf(st_.h_size);
    for (Eigen::Index r = 0; r < size(); ++r) masked[r] = st_.e_mask[static_cast<std::size_t>(r)] * e[r];
    if (exec_ == Exec::Parallel)
        kernels::curl_parallel(st_, masked.data(), hf.data());
    else
        kernels::curl_serial(st_, masked.data(), hf.data());
    return hf;
}

Eigen::VectorXcd MaxwellOperator::curl_adjoint(const Eigen::VectorXcd& hf) const {
    if (hf.size() != st_.h_size) throw ValidationError("face field has the wrong size");
    Eigen::VectorXcd e(size());
    if (exec_ == Exec::Parallel)
        kernels::curl_adjoint_parallel(st_, hf.data(), e.data());
    else
        kernels::curl_adjoint_serial(st_, hf.data(), e.data());
    return e;
}

SparseC MaxwellOperator::curl_matrix() const {
    std::vector<Triplet> t;
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        const auto& hs = st_.h_shape[c];
        for (int i0 = 0; i0 < hs.n[0]; ++i0)
            for (int i1 = 0; i1 < hs.n[1]; ++i1)
                for (int i2 = 0; i2 < hs.n[2]; ++i2) {
                    const int row = static_cast<int>(st_.h_offset[c] + hs.idx(i0, i1, i2));
                    auto add_diff = [&](int comp, int axis, double sign) {
                        const auto& es = st_.e_shape[comp];
                        std::array<int, 3> m{i0, i1, i2}, p = m;
                        cplx phase{1.0, 0.0};
                        p[axis] += 1;
                        if (p[axis] == es.n[axis]) {
                            p[axis] = 0;
                            phase = st_.ph[axis];
                        }
                        const long cm = st_.e_offset[comp] + es.idx(m[0], m[1], m[2]);
                        const long cp = st_.e_offset[comp] + es.idx(p[0], p[1], p[2]);
                        const double ih = sign / grid_.h[axis];
                        if (st_.e_mask[static_cast<std::size_t>(cp)] != 0.0) t.emplace_back(row, static_cast<int>(cp), phase * ih);
                        if (st_.e_mask[static_cast<std::size_t>(cm)] != 0.0) t.emplace_back(row, static_cast<int>(cm), -ih);
                    };
                    add_diff(b, a, 1.0);
                    add_diff(a, b, -1.0);
                }
    }
    SparseC C(st_.h_size, st_.e_size);
    C.setFromTriplets(t.begin(), t.end());
    return C;
}

SparseC MaxwellOperator::matrix() const {
    const SparseC C = curl_matrix();
    SparseC D(st_.h_size, st_.h_size);
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(st_.h_size));
    for (long r = 0; r < st_.h_size; ++r) t.emplace_back(static_cast<int>(r), static_cast<int>(r), st_.face_inv_eps[r]);
    D.setFromTriplets(t.begin(), t.end());
    SparseC A = SparseC(C.adjoint()) * D * C;
    if (penalty_ != 0.0) A += penalty_ * SparseC(grad_ * SparseC(grad_.adjoint()));
    A.prune(cplx(0.0, 0.0));
    return A;
}

double MaxwellOperator::edge_position(int c, int a, int i) const {
    return grid_.origin[a] + (a == c ? (i + 0.5) : static_cast<double>(i)) * grid_.h[a];
}

SampleLattice MaxwellOperator::component_lattice(int c) const {
    SampleLattice s;
    s.dim = 3;
    s.n = st_.e_shape[c].n;
    s.h = grid_.h;
    for (int a = 0; a < 3; ++a) s.origin[a] = edge_position(c, a, 0);
    return s;
}

Vec3 yee_symbol(const Vec3& h, const Vec3& q) {
    Vec3 s{};
    for (int a = 0; a < 3; ++a) s[a] = 2.0 / h[a] * std::sin(0.5 * q[a] * h[a]);
    return s;
}

Eigen::VectorXcd plane_wave(const MaxwellOperator& op, const Vec3& q, const Vec3& pol) {
    const auto& st = op.stencil();
    Eigen::VectorXcd v(st.e_size);
    for (int c = 0; c < 3; ++c) {
        const SampleLattice lat = op.component_lattice(c);
        const kernels::Shape3& sh = st.e_shape[c];
        for (int i = 0; i < sh.n[0]; ++i)
            for (int j = 0; j < sh.n[1]; ++j)
                for (int k = 0; k < sh.n[2]; ++k) {
                    const double phase = q[0] * lat.position(0, i) + q[1] * lat.position(1, j) + q[2] * lat.position(2, k);
                    v[st.e_offset[c] + sh.idx(i, j, k)] = pol[c] * std::polar(1.0, phase);
                }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Identity checks

double norm_estimate(const HermitianOperator& op, int iters, std::uint64_t seed) {
    Eigen::VectorXcd x = random_vector(op.size(), seed), y;
    x.normalize();
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        op.apply(x, y);
        lam = y.norm();
        if (lam == 0.0) return 0.0;
        x = y / lam;
    }
    return lam;
}

namespace {

IdentityReport symmetric_checks(const HermitianOperator& op, int trials, std::uint64_t seed) {
    IdentityReport rep;
    rep.trials = trials;
    const double anorm = std::max(norm_estimate(op, 40, seed ^ 0x5bd1e995ULL), 1e-300);
    rep.min_quadratic = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd Au, Av;
    for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXcd u = random_vector(op.size(), seed + 2 * t + 1);
        const Eigen::VectorXcd v = random_vector(op.size(), seed + 2 * t + 2);
        op.apply(u, Au);
        op.apply(v, Av);
        const cplx lhs = v.dot(Au);  // ⟨Au, v⟩ with conjugate on v
        const cplx rhs = Av.dot(u);
        rep.max_symmetry = std::max(rep.max_symmetry, std::abs(lhs - rhs) / (anorm * u.norm() * v.norm()));
        const cplx q = u.dot(Au);
        rep.min_quadratic = std::min(rep.min_quadratic, q.real() / (anorm * u.squaredNorm()));
    }
    return rep;
}

void enforce(const IdentityReport& r, double tol) {
    if (r.max_symmetry > tol) throw StructuralError("Hermitian symmetry violated", r.max_symmetry);
    if (r.min_quadratic < -tol) throw StructuralError("quadratic form negative", -r.min_quadratic);
    if (r.curl_grad > tol) throw StructuralError("curl of gradient nonzero", r.curl_grad);
    if (r.curl_grad_integer != 0.0) throw StructuralError("curl of integer gradient nonzero", r.curl_grad_integer);
}

}  // namespace

IdentityReport check_identities(const MaxwellOperator& op, int trials, std::uint64_t seed, double tol) {
    IdentityReport rep = symmetric_checks(op, trials, seed);
    const SparseC& G = op.gradient();
    const double hmin = std::min({op.grid().h[0], op.grid().h[1], op.grid().h[2]});
    std::mt19937_64 rng(seed + 977);
    std::uniform_int_distribution<int> di(-8, 8);
    bool exact_phases = true;
    for (const auto& b : op.bc())
        if (!b.is_wall() && b.k != 0.0) exact_phases = false;
    // Integer arithmetic is exact only for power-of-two spacings.
    for (double hv : op.grid().h) {
        int ex = 0;
        if (std::frexp(hv, &ex) != 0.5) exact_phases = false;
    }
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXcd phi = random_vector(G.cols(), seed + 1000 + t);
        Eigen::VectorXcd e = G * phi;
        const double en = e.norm();
        if (en > 0.0) rep.curl_grad = std::max(rep.curl_grad, op.curl(e).norm() / (2.0 * en / hmin));
        if (exact_phases) {
            for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] = cplx(di(rng), di(rng));
            e = G * phi;
            rep.curl_grad_integer = std::max(rep.curl_grad_integer, op.curl(e).cwiseAbs().maxCoeff());
        }
    }
    enforce(rep, tol);
    return rep;
}

IdentityReport check_identities(const ScalarOperator& op, int trials, std::uint64_t seed, double tol) {
    IdentityReport rep = symmetric_checks(op, trials, seed);
    enforce(rep, tol);
    return rep;
}

}  // namespace gapguide
