"""Independent reference values.

The soliton constants here come from Beta-function integrals of powers of
sech together with the two conservation laws of the stationary equation,
so they share no code path with the quadrature and root search in the
library.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.special import beta as beta_fn


def sech_power_integral(a: float) -> float:
    """Integral of sech(y)**a over the real line, equal to B(a/2, 1/2)."""
    return float(beta_fn(a / 2.0, 0.5))


def soliton_constants(p: float) -> dict[str, float]:
    """Amplitude, inverse width, frequency and theta of the unit-mass soliton.

    For ``A sech^s(B x)`` with ``s = 2/(p-2)``, ``B = (p-2) sqrt(w)/2`` and
    ``A^(p-2) = p w / 2``, the mass is ``A^2 B(s, 1/2) / B``; this fixes
    ``w`` in closed form.  The first integral ``T - w + (2/p) V = 0`` and the
    equation tested against ``phi`` give ``T = (p-2) V / (2p)``.
    """
    s = 2.0 / (p - 2.0)
    I2 = sech_power_integral(2 * s)
    Ip = sech_power_integral(p * s)
    # mass(w) = k * w^e
    k = (p / 2.0) ** (2.0 / (p - 2.0)) * 2.0 / (p - 2.0) * I2
    e = 2.0 / (p - 2.0) - 0.5
    w = k ** (-1.0 / e)
    A = (p * w / 2.0) ** (1.0 / (p - 2.0))
    B = (p - 2.0) * math.sqrt(w) / 2.0
    V = A**p * Ip / B
    T = (p - 2.0) * V / (2.0 * p)
    return {"C": A, "c": B, "omega": w, "theta": -(0.5 * T - V / p), "T": T, "V": V}


P4 = {"C": math.sqrt(2) / 4, "c": 0.25, "theta": 1.0 / 96.0, "omega": 1.0 / 16.0}


def brute_force_core(g, n_sub: int = 60, exact_sub=None):
    """Total length and diameter of the core by all-pairs Dijkstra on a subdivided copy.

    Each finite edge is cut into ``n_sub`` pieces; the diameter of the
    subdivided vertex set converges to the true one from below and is exact
    when the maximisers sit on subdivision points.
    """
    finite = g.finite_edges
    if not finite:
        return 0.0, 0.0
    index = {}

    def node(key):
        if key not in index:
            index[key] = len(index)
        return index[key]

    rows, cols, data = [], [], []
    for e in finite:
        n = n_sub if exact_sub is None else exact_sub(e)
        chain = [("v", e.tail)] + [("e", e.id, k) for k in range(1, n)] + [("v", e.head)]
        for a, b in zip(chain[:-1], chain[1:]):
            rows.append(node(a))
            cols.append(node(b))
            data.append(e.length / n)
    N = len(index)
    mat = csr_matrix((data, (rows, cols)), shape=(N, N))
    D = dijkstra(mat, directed=False)
    return float(sum(e.length for e in finite)), float(np.max(D))


def large_mass_gap_p4(mu: float, ell: float, kappa: float) -> float:
    """Continuous gap of the cut-and-lowered p=4 soliton on an interval where w = kappa.

    Direct quadrature of the renormalised trial function against -mu^3/96.
    """
    from scipy.integrate import quad

    C, c = math.sqrt(2) / 4, 0.25
    phi = lambda x: C * mu / math.cosh(c * mu * x)  # noqa: E731
    dphi = lambda x: -C * c * mu * mu * math.tanh(c * mu * x) / math.cosh(c * mu * x)  # noqa: E731
    a = phi(ell / 2)
    kw = dict(epsabs=0, epsrel=1e-13, limit=200)
    M = 2 * quad(lambda x: (phi(x) - a) ** 2, 0, ell / 2, **kw)[0]
    T = 2 * quad(lambda x: dphi(x) ** 2, 0, ell / 2, **kw)[0]
    V = 2 * quad(lambda x: (phi(x) - a) ** 4, 0, ell / 2, **kw)[0]
    s = mu / M
    return 0.5 * s * T - s * s * V / 4 - 0.5 * kappa * mu + mu**3 / 96
