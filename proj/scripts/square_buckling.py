"""Clamped buckling eigenvalue of the unit square by polynomial Galerkin.

ψ = (1−x²)²(1−y²)² p(x, y) on [−1, 1]², p of total degree ≤ P in even powers
(symmetric first mode). Solves ⟨Δψ, Δφ⟩ = Λ ⟨∇ψ, ∇φ⟩ and rescales to side 1.
"""
import numpy as np
import sympy as sp
from scipy.linalg import eigh

x, y = sp.symbols("x y")


def first_eigenvalue(P=10, order=40):
    w = (1 - x**2) ** 2 * (1 - y**2) ** 2
    basis = [w * x ** (2 * i) * y ** (2 * j) for i in range(P + 1) for j in range(P + 1 - i)]
    lap = [sp.lambdify((x, y), sp.diff(b, x, 2) + sp.diff(b, y, 2)) for b in basis]
    gx = [sp.lambdify((x, y), sp.diff(b, x)) for b in basis]
    gy = [sp.lambdify((x, y), sp.diff(b, y)) for b in basis]
    t, wt = np.polynomial.legendre.leggauss(order)
    X, Y = np.meshgrid(t, t, indexing="ij")
    W = np.outer(wt, wt)
    L = np.array([f(X, Y) * np.ones_like(X) for f in lap])
    GX = np.array([f(X, Y) * np.ones_like(X) for f in gx])
    GY = np.array([f(X, Y) * np.ones_like(X) for f in gy])
    A = np.einsum("iab,jab,ab->ij", L, L, W)
    B = np.einsum("iab,jab,ab->ij", GX, GX, W) + np.einsum("iab,jab,ab->ij", GY, GY, W)
    lam = eigh(A, B, eigvals_only=True)[0]
    return 4.0 * lam  # side 2 → side 1


if __name__ == "__main__":
    for P in (6, 8, 10):
        print(P, f"{first_eigenvalue(P):.7f}")
