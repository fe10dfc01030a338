#include "gapguide/kernels.hpp"

#include <algorithm>

namespace gapguide::kernels {

namespace {

template <bool Parallel>
void scalar_apply(const ScalarStencil& s, const cplx* x, cplx* y) {
    const int n0 = s.n0, n1 = s.n1;
    const cplx cph0 = std::conj(s.ph0), cph1 = std::conj(s.ph1);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const long r = static_cast<long>(i) * n1 + j;
            cplx acc = s.diag[r] * x[r];
            if (i + 1 < n0) acc -= s.fx[r] * x[r + n1];
            else if (s.wrap0) acc -= s.fx[r] * s.ph0 * x[j];
            if (i > 0) acc -= s.fx[r - n1] * x[r - n1];
            else if (s.wrap0) acc -= s.fx[static_cast<long>(n0 - 1) * n1 + j] * cph0 * x[static_cast<long>(n0 - 1) * n1 + j];
            if (j + 1 < n1) acc -= s.fy[r] * x[r + 1];
            else if (s.wrap1) acc -= s.fy[r] * s.ph1 * x[r - (n1 - 1)];
            if (j > 0) acc -= s.fy[r - 1] * x[r - 1];
            else if (s.wrap1) acc -= s.fy[r + n1 - 1] * cph1 * x[r + n1 - 1];
            y[r] = acc;
        }
    }
}

// Forward difference along axis `a` of component array `src` (shape ss) evaluated
// at multi-index m of an output array; returns (φ src[m+e_a] − src[m]) / h_a.
inline cplx fwd_diff(const YeeStencil& s, const Shape3& ss, const cplx* src, std::array<int, 3> m, int a) {
    const cplx here = src[ss.idx(m[0], m[1], m[2])];
    cplx phase{1.0, 0.0};
    m[a] += 1;
    if (m[a] == ss.n[a]) {  // only reachable on Bloch axes
        m[a] = 0;
        phase = s.ph[a];
    }
    return (phase * src[ss.idx(m[0], m[1], m[2])] - here) / s.h[a];
}

// Adjoint of fwd_diff: node-indexed output from center-indexed input (shape hs).
inline cplx adj_diff(const YeeStencil& s, const Shape3& hs, const cplx* src, std::array<int, 3> m, int a) {
    cplx acc{0.0, 0.0};
    const int i = m[a];
    if (i < hs.n[a]) acc -= src[hs.idx(m[0], m[1], m[2])];
    if (i > 0) {
        m[a] = i - 1;
        acc += src[hs.idx(m[0], m[1], m[2])];
    } else if (!s.wall[a]) {
        m[a] = hs.n[a] - 1;
        acc += std::conj(s.ph[a]) * src[hs.idx(m[0], m[1], m[2])];
    }
    return acc / s.h[a];
}

template <bool Parallel>
void curl_impl(const YeeStencil& s, const cplx* e, cplx* hout) {
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        const Shape3& hs = s.h_shape[c];
        const cplx* eb = e + s.e_offset[b];
        const cplx* ea = e + s.e_offset[a];
        cplx* out = hout + s.h_offset[c];
#pragma omp parallel for schedule(static) if (Parallel)
        for (int i0 = 0; i0 < hs.n[0]; ++i0)
            for (int i1 = 0; i1 < hs.n[1]; ++i1)
                for (int i2 = 0; i2 < hs.n[2]; ++i2) {
                    const std::array<int, 3> m{i0, i1, i2};
                    out[hs.idx(i0, i1, i2)] =
                        fwd_diff(s, s.e_shape[b], eb, m, a) - fwd_diff(s, s.e_shape[a], ea, m, b);
                }
    }
}

template <bool Parallel>
void curl_adjoint_impl(const YeeStencil& s, const cplx* hin, cplx* e) {
    for (int comp = 0; comp < 3; ++comp) {
        const int c1 = (comp + 1) % 3, c2 = (comp + 2) % 3;
        const Shape3& es = s.e_shape[comp];
        const cplx* h1 = hin + s.h_offset[c1];
        const cplx* h2 = hin + s.h_offset[c2];
        cplx* out = e + s.e_offset[comp];
        const double* mask = s.e_mask.data() + s.e_offset[comp];
#pragma omp parallel for schedule(static) if (Parallel)
        for (int i0 = 0; i0 < es.n[0]; ++i0)
            for (int i1 = 0; i1 < es.n[1]; ++i1)
                for (int i2 = 0; i2 < es.n[2]; ++i2) {
                    const long r = es.idx(i0, i1, i2);
                    if (mask[r] == 0.0) {
                        out[r] = 0.0;
                        continue;
                    }
                    const std::array<int, 3> m{i0, i1, i2};
                    out[r] = adj_diff(s, s.h_shape[c1], h1, m, c2) - adj_diff(s, s.h_shape[c2], h2, m, c1);
                }
    }
}

template <bool Parallel>
void maxwell_apply(const YeeStencil& s, const cplx* x, cplx* y, cplx* scratch) {
    // y doubles as the masked copy of x
#pragma omp parallel for schedule(static) if (Parallel)
    for (long r = 0; r < s.e_size; ++r) y[r] = s.e_mask[r] * x[r];
    curl_impl<Parallel>(s, y, scratch);
#pragma omp parallel for schedule(static) if (Parallel)
    for (long r = 0; r < s.h_size; ++r) scratch[r] *= s.face_inv_eps[r];
    curl_adjoint_impl<Parallel>(s, scratch, y);
}

}  // namespace

void scalar_apply_serial(const ScalarStencil& s, const cplx* x, cplx* y) { scalar_apply<false>(s, x, y); }
void scalar_apply_parallel(const ScalarStencil& s, const cplx* x, cplx* y) { scalar_apply<true>(s, x, y); }

YeeStencil make_yee_layout(std::array<int, 3> n, Vec3 h, std::array<bool, 3> wall, std::array<cplx, 3> ph) {
    YeeStencil s;
    s.n = n;
    s.h = h;
    s.wall = wall;
    s.ph = ph;
    long eo = 0, ho = 0;
    for (int c = 0; c < 3; ++c) {
        for (int a = 0; a < 3; ++a) {
            const int nodes = wall[a] ? n[a] + 1 : n[a];
            s.e_shape[c].n[a] = a == c ? n[a] : nodes;
            s.h_shape[c].n[a] = a == c ? nodes : n[a];
        }
        s.e_offset[c] = eo;
        s.h_offset[c] = ho;
        eo += s.e_shape[c].size();
        ho += s.h_shape[c].size();
    }
    s.e_size = eo;
    s.h_size = ho;
    s.face_inv_eps.assign(static_cast<std::size_t>(ho), 1.0);
    s.e_mask.assign(static_cast<std::size_t>(eo), 1.0);
    for (int c = 0; c < 3; ++c) {
        const Shape3& es = s.e_shape[c];
        for (int i0 = 0; i0 < es.n[0]; ++i0)
            for (int i1 = 0; i1 < es.n[1]; ++i1)
                for (int i2 = 0; i2 < es.n[2]; ++i2) {
                    const std::array<int, 3> m{i0, i1, i2};
                    bool on_wall = false;
                    for (int a = 0; a < 3; ++a)
                        if (a != c && wall[a] && (m[a] == 0 || m[a] == n[a])) on_wall = true;
                    if (on_wall) s.e_mask[static_cast<std::size_t>(s.e_offset[c] + es.idx(i0, i1, i2))] = 0.0;
                }
    }
    return s;
}

void curl_serial(const YeeStencil& s, const cplx* e, cplx* hout) { curl_impl<false>(s, e, hout); }
void curl_parallel(const YeeStencil& s, const cplx* e, cplx* hout) { curl_impl<true>(s, e, hout); }
void curl_adjoint_serial(const YeeStencil& s, const cplx* hin, cplx* e) { curl_adjoint_impl<false>(s, hin, e); }
void curl_adjoint_parallel(const YeeStencil& s, const cplx* hin, cplx* e) { curl_adjoint_impl<true>(s, hin, e); }

void maxwell_apply_serial(const YeeStencil& s, const cplx* x, cplx* y, cplx* scratch) {
    maxwell_apply<false>(s, x, y, scratch);
}
void maxwell_apply_parallel(const YeeStencil& s, const cplx* x, cplx* y, cplx* scratch) {
    maxwell_apply<true>(s, x, y, scratch);
}

}  // namespace gapguide::kernels
