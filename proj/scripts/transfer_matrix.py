"""Band edges of a 1D layered stack from the transfer-matrix trace condition |tr T(λ)| = 2.

Operator −(u′/ε)′ = λu; state (u, u′/ε) is continuous across interfaces.
Usage: python3 transfer_matrix.py [eps_a] [eps_b] [fill] [lambda_max]
"""
import sys

import numpy as np
from scipy.optimize import brentq


def trace(lam, layers):
    t = np.eye(2)
    for eps, d in layers:
        k = np.sqrt(lam * eps)
        c = 1.0 / eps
        m = np.array([[np.cos(k * d), np.sin(k * d) / (c * k)], [-c * k * np.sin(k * d), np.cos(k * d)]])
        t = m @ t
    return np.trace(t)


def gaps(eps_a=13.0, eps_b=1.0, fill=0.5, lam_max=12.0, samples=200001):
    layers = [(eps_a, fill), (eps_b, 1.0 - fill)]
    f = lambda lam: abs(trace(lam, layers)) - 2.0
    lams = np.linspace(1e-6, lam_max, samples)
    v = np.array([f(x) for x in lams])
    idx = np.where(np.diff(np.sign(v)) != 0)[0]
    edges = [brentq(f, lams[i], lams[i + 1], xtol=1e-14) for i in idx]
    return list(zip(edges[0::2], edges[1::2]))


if __name__ == "__main__":
    args = [float(a) for a in sys.argv[1:]]
    for a, b in gaps(*args):
        print(f"{a:.8f} {b:.8f}")
