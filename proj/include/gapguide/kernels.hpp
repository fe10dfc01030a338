#pragma once

#include <array>
#include <vector>

#include "gapguide/grid.hpp"

namespace gapguide::kernels {

/// Row-major 3D array shape (last axis fastest).
struct Shape3 {
    std::array<int, 3> n{1, 1, 1};
    [[nodiscard]] long size() const { return static_cast<long>(n[0]) * n[1] * n[2]; }
    [[nodiscard]] long idx(int i0, int i1, int i2) const { return (static_cast<long>(i0) * n[1] + i1) * n[2] + i2; }
};

/// Five-point flux-form stencil of −∇·(1/ε)∇ on a 2D cell grid.
/// Face coefficients already include 1/h².
struct ScalarStencil {
    int n0 = 0, n1 = 0;
    std::vector<double> fx;    // face (i,j)-(i+1,j), n0*n1 entries (last row = wrap face)
    std::vector<double> fy;    // face (i,j)-(i,j+1), n0*n1 entries (last col = wrap face)
    std::vector<double> diag;  // n0*n1
    bool wrap0 = true, wrap1 = true;
    cplx ph0{1.0, 0.0}, ph1{1.0, 0.0};  // Bloch factor across the far face
};

void scalar_apply_serial(const ScalarStencil& s, const cplx* x, cplx* y);
void scalar_apply_parallel(const ScalarStencil& s, const cplx* x, cplx* y);

/// Yee-grid data for the double curl: E on edges, H on faces.
struct YeeStencil {
    std::array<int, 3> n{1, 1, 1};
    Vec3 h{1.0, 1.0, 1.0};
    std::array<bool, 3> wall{false, false, false};
    std::array<cplx, 3> ph{cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{1.0, 0.0}};
    std::array<Shape3, 3> e_shape, h_shape;
    std::array<long, 3> e_offset{0, 0, 0}, h_offset{0, 0, 0};
    long e_size = 0, h_size = 0;
    std::vector<double> face_inv_eps;  // h_size entries
    std::vector<double> e_mask;        // 1 interior, 0 on conducting walls
};

/// Builds shapes and offsets; face coefficients are filled by the caller.
YeeStencil make_yee_layout(std::array<int, 3> n, Vec3 h, std::array<bool, 3> wall, std::array<cplx, 3> ph);

void curl_serial(const YeeStencil& s, const cplx* e, cplx* hout);
void curl_parallel(const YeeStencil& s, const cplx* e, cplx* hout);
void curl_adjoint_serial(const YeeStencil& s, const cplx* hin, cplx* e);
void curl_adjoint_parallel(const YeeStencil& s, const cplx* hin, cplx* e);

/// y = P Cᴴ (1/ε) C P x with scratch of size h_size.
void maxwell_apply_serial(const YeeStencil& s, const cplx* x, cplx* y, cplx* scratch);
void maxwell_apply_parallel(const YeeStencil& s, const cplx* x, cplx* y, cplx* scratch);

}  // namespace gapguide::kernels
