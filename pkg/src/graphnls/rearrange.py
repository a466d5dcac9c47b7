"""Decreasing rearrangement of graph functions onto an interval.

The rearrangement acts on the piecewise linear interpolant of the nodal
values of ``|u|``.  Its distribution function
``rho(t) = |{x : |u|(x) > t}|`` is piecewise linear in ``t`` with breakpoints
at the nodal values, so ``u*`` is itself piecewise linear and is stored
exactly through its knots.  Norms and kinetic energies of both sides are
exact integrals of piecewise linear functions, which makes equimeasurability
hold to rounding error and the Polya-Szego inequality an exact statement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functional import kinetic
from .graph import GraphFunction

# cells whose end values differ by less than this (relative to the sup) are
# treated as flat; the induced error on any L^r norm is of order FLAT_RTOL**2
FLAT_RTOL = 1e-7


def _p1_power_integral(a: np.ndarray, b: np.ndarray, length: np.ndarray, r: float) -> np.ndarray:
    """Exact integral of ``y**r`` for ``y`` linear from ``a`` to ``b`` (both >= 0)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = 0.5 * (a + b)
    d = 0.5 * np.abs(b - a)
    out = np.zeros(np.broadcast(a, b, length).shape)
    pos = m > 0
    close = pos & (d <= 1e-3 * m)
    # binomial series in (d/m)^2 around the midpoint
    q = np.where(close, d / np.where(pos, m, 1.0), 0.0) ** 2
    c2 = r * (r - 1) / 6.0
    c4 = r * (r - 1) * (r - 2) * (r - 3) / 120.0
    series = m**r * (1.0 + c2 * q + c4 * q * q)
    far = pos & ~close
    with np.errstate(invalid="ignore", divide="ignore"):
        exact = (np.maximum(a, b) ** (r + 1) - np.minimum(a, b) ** (r + 1)) / ((r + 1) * 2 * d)
    out = np.where(close, series, np.where(far, exact, 0.0))
    return length * out


def p1_norm(values_a, values_b, length, r: float) -> float:
    """``L^r`` norm of a function linear on each cell; ``r = inf`` gives the sup."""
    a = np.abs(np.asarray(values_a, dtype=float))
    b = np.abs(np.asarray(values_b, dtype=float))
    if math.isinf(r):
        return float(max(a.max(initial=0.0), b.max(initial=0.0)))
    return float(np.sum(_p1_power_integral(a, b, length, r)) ** (1.0 / r))


def graph_norm(u: GraphFunction, r: float) -> float:
    """Exact ``L^r`` norm of the interpolant of ``|u|`` over the meshed graph."""
    m = u.mesh
    v = np.abs(u.values)
    return p1_norm(v[m.cell_a], v[m.cell_b], m.cell_len, r)


@dataclass(frozen=True, eq=False)
class IntervalFunction:
    """Nonincreasing piecewise linear function on ``[0, length]``.

    ``knots`` are strictly increasing abscissae starting at 0 and ending at
    ``length``; flat stretches appear as consecutive knots with equal values.
    """

    knots: np.ndarray
    knot_values: np.ndarray

    @property
    def length(self) -> float:
        return float(self.knots[-1])

    def __call__(self, s) -> np.ndarray:
        return np.interp(s, self.knots, self.knot_values)

    def resample(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Values on the uniform grid ``k * length / n``, ``k = 0..n``."""
        s = np.linspace(0.0, self.length, n + 1)
        return s, self(s)

    def norm(self, r: float) -> float:
        y = self.knot_values
        return p1_norm(y[:-1], y[1:], np.diff(self.knots), r)

    @property
    def kinetic(self) -> float:
        ds = np.diff(self.knots)
        dy = np.diff(self.knot_values)
        keep = ds > 0
        return float(np.sum(dy[keep] ** 2 / ds[keep]))

    @property
    def is_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.knot_values) <= 0))


def rearrange_cells(a: np.ndarray, b: np.ndarray, length: np.ndarray) -> IntervalFunction:
    """Rearrangement of a nonnegative function linear on cells with end values ``a, b``."""
    lo = np.minimum(a, b).astype(float)
    hi = np.maximum(a, b).astype(float)
    length = np.asarray(length, dtype=float)
    total = float(length.sum())
    scale = float(hi.max(initial=0.0))
    flat = (hi - lo) <= FLAT_RTOL * scale
    mid = 0.5 * (lo + hi)
    lo = np.where(flat, mid, lo)
    hi = np.where(flat, mid, hi)

    levels = np.unique(np.concatenate([lo, hi]))[::-1]  # descending
    n = len(levels)
    # level k: index into ``levels``; interval k sits between levels k and k+1
    k_hi = n - 1 - np.searchsorted(levels[::-1], hi)
    k_lo = n - 1 - np.searchsorted(levels[::-1], lo)

    slope_change = np.zeros(n + 1)
    steep = ~flat
    rate = np.where(steep, length / np.where(steep, hi - lo, 1.0), 0.0)
    np.add.at(slope_change, k_hi[steep], rate[steep])
    np.add.at(slope_change, k_lo[steep], -rate[steep])
    slope = np.cumsum(slope_change)[: n - 1]  # measure per unit level on interval k

    jumps = np.zeros(n)
    np.add.at(jumps, k_hi[flat], length[flat])
    # measure of {u > levels[k]} and of {u >= levels[k]}
    gaps = slope * (levels[:-1] - levels[1:])
    above = np.zeros(n)
    above[1:] = np.cumsum(gaps + jumps[:-1])
    at_or_above = above + jumps

    s = np.empty(2 * n)
    y = np.empty(2 * n)
    s[0::2], s[1::2] = above, at_or_above
    y[0::2] = y[1::2] = levels
    rest = total - s[-1]
    if rest > 0:
        s = np.append(s, total)
        y = np.append(y, levels[-1])
    # rounding may leave knots marginally out of order; snap to the layout
    s = np.clip(np.maximum.accumulate(s), 0.0, total)
    s[-1] = total
    keep = np.ones(len(s), dtype=bool)
    keep[1:] = (np.diff(s) > 0) | (np.diff(y) != 0)
    s, y = s[keep], y[keep]
    return IntervalFunction(s, y)


def monotone_rearrangement(u: GraphFunction) -> IntervalFunction:
    """Decreasing rearrangement of ``|u|`` onto ``[0, total meshed length]``."""
    m = u.mesh
    v = np.abs(u.values)
    return rearrange_cells(v[m.cell_a], v[m.cell_b], m.cell_len)


@dataclass(frozen=True)
class PolyaSzegoReport:
    kinetic_before: float
    kinetic_after: float
    satisfied: bool


def polya_szego_check(u: GraphFunction, rtol: float = 1e-6) -> PolyaSzegoReport:
    before = kinetic(u)
    after = monotone_rearrangement(u).kinetic
    return PolyaSzegoReport(before, after, after <= before + rtol * (1.0 + before))
