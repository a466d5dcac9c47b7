"""Existence and nonexistence tests for ground states.

* :func:`existence_criterion` compares the energy of any trial function with
  the line-soliton threshold; energy at or below it certifies a ground state.
* :func:`candidate_large_mass` and :func:`candidate_small_mass` build the two
  explicit trial functions (a cut soliton sitting inside the potential, and
  half-solitons on the half-lines joined by a plateau on the core).
* :func:`nonexistence_condition` evaluates the three dimensionless ratios of
  the sufficient condition for nonexistence, for a user-chosen constant.
* :func:`nfork_build` / :func:`nfork_window` give the fork example where the
  nonexistence window is nonempty.
* :func:`assumption_h` decides whether every point lies on a trail joining
  two half-lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CoreTooShort, EmptyCore, ZeroMass, ZeroPotential
from .functional import Exponents, energy, mass, soliton_energy_threshold, soliton_params
from .graph import GraphFunction, Mesh, MetricGraph, PotentialField, build_graph, compact_core


@dataclass(frozen=True)
class CriterionReport:
    mu: float
    candidate_energy: float
    threshold: float

    @property
    def gap(self) -> float:
        return self.candidate_energy - self.threshold

    @property
    def passed(self) -> bool:
        return self.gap <= 0

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "candidate_energy": self.candidate_energy,
            "threshold": self.threshold,
            "gap": self.gap,
            "passed": self.passed,
        }


def existence_criterion(v: GraphFunction, w: PotentialField | None, p: float) -> CriterionReport:
    mu = mass(v)
    if not mu > 0:
        raise ZeroMass("trial function has zero mass")
    e = energy(v, w, p).E
    return CriterionReport(mu, e, soliton_energy_threshold(soliton_params(p), mu))


# --- large mass ---------------------------------------------------------------------


def potential_peak(w: PotentialField, rtol: float = 1e-12) -> tuple[str, int, int]:
    """Core edge and index run ``[lo, hi]`` of grid points where ``w`` is maximal.

    Only edge interiors are searched.  When the maximum is a plateau the
    whole contiguous run around the first maximiser is returned.
    """
    best = None
    if w.sup_norm == 0:
        raise ZeroPotential("potential vanishes identically")
    for gr in w.mesh.grids:
        if gr.edge.is_infinite or len(gr.dofs) < 3:
            continue
        vals = w.values[gr.dofs]
        k = 1 + int(np.argmax(vals[1:-1]))
        if best is None or vals[k] > best[0]:
            lo, hi = _run(vals, k, vals[k] * (1 - rtol))
            best = (vals[k], gr.edge.id, max(lo, 1), min(hi, len(vals) - 2))
    if best is None:
        raise CoreTooShort("no core edge has a grid point in its interior")
    if best[0] <= 0:
        raise ZeroPotential("potential vanishes inside every core edge")
    return best[1:]


def _run(vals: np.ndarray, k: int, level: float) -> tuple[int, int]:
    above = vals >= level
    lo = k
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = k
    while hi < len(vals) - 1 and above[hi + 1]:
        hi += 1
    return lo, hi


@dataclass(frozen=True)
class LargeMassSite:
    """Interval ``[center - half_width, center + half_width]`` of one core edge."""

    edge_id: str
    center_index: int
    half_cells: int
    center: float
    half_width: float
    kappa: float


def large_mass_site(w: PotentialField, floor_fraction: float = 0.9) -> LargeMassSite:
    """Where to put the cut soliton.

    The centre is the middle of the run of grid points where ``w`` is
    largest.  The interval is then grown symmetrically for as long as it
    stays inside the edge and ``w`` stays above ``floor_fraction`` times
    its peak; ``kappa`` is the minimum of ``w`` over the final interval.
    """
    if not 0 < floor_fraction <= 1:
        raise ValueError("floor_fraction must lie in (0, 1]")
    if w.sup_norm == 0:
        raise ZeroPotential("potential vanishes identically")
    edge_id, lo, hi = potential_peak(w)
    gr = w.mesh.grid(edge_id)
    vals = w.values[gr.dofs]
    c = (lo + hi) // 2
    level = floor_fraction * vals[c]
    r = 0
    while c - r - 1 >= 0 and c + r + 1 < len(vals) and min(vals[c - r - 1], vals[c + r + 1]) >= level:
        r += 1
    if r < 1:
        raise CoreTooShort(f"edge {edge_id!r} leaves no room for an interval around the peak")
    kappa = float(vals[c - r : c + r + 1].min())
    return LargeMassSite(edge_id, c, r, float(gr.coords[c]), r * gr.spacing, kappa)


def candidate_large_mass(
    w: PotentialField, p: float, mu: float, floor_fraction: float = 0.9
) -> GraphFunction:
    """Soliton centred on the potential peak, cut and lowered to vanish at the
    ends of the site interval, renormalised to mass ``mu``, zero elsewhere."""
    if mu <= 0:
        raise ValueError("mass must be positive")
    site = large_mass_site(w, floor_fraction)
    sol = soliton_params(p)
    mesh = w.mesh
    gr = mesh.grid(site.edge_id)
    idx = np.arange(site.center_index - site.half_cells, site.center_index + site.half_cells + 1)
    x = gr.coords[idx] - site.center
    vals = sol.profile(x, mu) - sol.profile(site.half_width, mu)
    vals[0] = vals[-1] = 0.0
    out = np.zeros(mesh.n_dofs)
    out[gr.dofs[idx]] = np.maximum(vals, 0.0)
    v = GraphFunction(mesh, out)
    m = mass(v)
    if not m > 0:
        raise CoreTooShort("cut soliton vanishes on the grid")
    return v * math.sqrt(mu / m)


# --- small mass ---------------------------------------------------------------------


def plateau_mass_parameter(n: int, core_length: float, p: float, mu: float) -> float:
    """Solve ``mu = (n/2) m + C_p^2 |K| m^(2 alpha)`` for ``m`` by bisection."""
    if n < 1:
        raise ValueError("need at least one half-line")
    if mu <= 0:
        raise ValueError("mass must be positive")
    sol = soliton_params(p)
    two_alpha = 2 * sol.exponents.alpha

    def total(m):
        return 0.5 * n * m + sol.C_p**2 * core_length * m**two_alpha

    lo, hi = 0.0, 2.0 * mu / n
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if total(mid) < mu:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4e-16 * hi:
            break
    return 0.5 * (lo + hi)


def candidate_small_mass(mesh: Mesh, p: float, mu: float) -> tuple[GraphFunction, float]:
    """Half-solitons ``phi_m`` on every half-line and the constant ``phi_m(0)`` on the core.

    Returns the sampled function, rescaled to mass ``mu`` on the grid, and
    the analytic parameter ``m``.  With an empty core this is the soliton
    split evenly over the half-lines.
    """
    g = mesh.graph
    n = g.n_halflines
    core = compact_core(g)
    m = plateau_mass_parameter(n, core.total_length, p, mu)
    sol = soliton_params(p)
    vals = np.full(mesh.n_dofs, sol.amplitude(m))
    on_hl = mesh.halfline_coord > 0
    vals[on_hl] = sol.profile(mesh.halfline_coord[on_hl], m)
    u = GraphFunction(mesh, vals)
    return u * math.sqrt(mu / mass(u)), m


@dataclass(frozen=True)
class SmallMassReport:
    m: np.ndarray | float
    lhs: np.ndarray | float
    rhs: np.ndarray | float

    @property
    def satisfied(self):
        return self.lhs < self.rhs

    @property
    def ratio(self):
        """``(lhs - rhs) / m^(2 alpha)``; tends to a negative constant as ``m -> 0``."""
        return (self.lhs - self.rhs) / self.m**self._two_alpha

    _two_alpha: float = 0.0


def small_mass_inequality(
    g: MetricGraph, p: float, m, w: PotentialField | float
) -> SmallMassReport:
    """Both sides of the energy comparison for the plateau trial function.

    ``lhs = -(n/2) theta m^(2b+1) - C^p |K| m^(p a) / p - (C^2 |K| / 2) m^(2a) int_K w``
    and ``rhs = -theta ((n/2) m + C^2 |K| m^(2a))^(2b+1)``, with ``a, b`` the
    soliton exponents.  ``m`` may be an array.  ``w`` is a potential field or
    directly the value of its integral over the core.
    """
    core = compact_core(g)
    if core.is_empty:
        raise EmptyCore("the plateau trial function needs a compact core")
    sol = soliton_params(p)
    ex = sol.exponents
    n = g.n_halflines
    K = core.total_length
    int_w = w.integral if isinstance(w, PotentialField) else float(w)
    m = np.asarray(m, dtype=float)
    lhs = (
        -0.5 * n * sol.theta_p * m**ex.energy_power
        - sol.C_p**p * K * m ** (p * ex.alpha) / p
        - 0.5 * sol.C_p**2 * K * m ** (2 * ex.alpha) * int_w
    )
    rhs = -sol.theta_p * (0.5 * n * m + sol.C_p**2 * K * m ** (2 * ex.alpha)) ** ex.energy_power
    if m.ndim == 0:
        m, lhs, rhs = float(m), float(lhs), float(rhs)
    return SmallMassReport(m, lhs, rhs, _two_alpha=2 * ex.alpha)


# --- nonexistence -------------------------------------------------------------------


@dataclass(frozen=True)
class NonexistenceReport:
    mu: float
    epsilon: float
    r1: float
    r2: float
    r3: float
    g_const: float

    @property
    def condition_met(self) -> bool:
        return max(self.r1, self.r2, self.r3) < self.epsilon

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "epsilon": self.epsilon,
            "r1_diameter": self.r1,
            "r2_inverse_length": self.r2,
            "r3_potential": self.r3,
            "g_const": self.g_const,
            "condition_met": self.condition_met,
        }


def nonexistence_condition(
    g: MetricGraph, w: PotentialField | float, p: float, mu: float, epsilon: float
) -> NonexistenceReport:
    """Ratios ``mu^b diam(K)``, ``1/(mu^b |K|)``, ``|w|_inf / mu^(2b)`` against ``epsilon``.

    ``w`` is a potential field or its sup norm.  A met condition rules out
    ground states only if ``epsilon`` is below a constant that is not known
    explicitly, so the verdict is only as good as the chosen ``epsilon``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not mu > 0:
        raise ValueError("mass must be positive")
    core = compact_core(g)
    if core.is_empty:
        raise EmptyCore("the condition involves the length of the compact core")
    beta = Exponents(p).beta
    sup = w.sup_norm if isinstance(w, PotentialField) else float(w)
    mb = mu**beta
    return NonexistenceReport(
        mu=mu,
        epsilon=epsilon,
        r1=mb * core.diameter,
        r2=1.0 / (mb * core.total_length),
        r3=sup / mb**2,
        g_const=sup * core.total_length ** ((p - 2) / p),
    )


def nfork_build(n: int, l: float, k: int, epsilon: float) -> tuple[MetricGraph, list[dict]]:
    """One half-line and ``n`` edges of length ``l`` at a common vertex.

    Each edge carries ``epsilon^3 x^(2k) / (4 l^(2k+2))``, with ``x`` measured
    from the common vertex, so the sup norm is ``epsilon^3 / (4 l^2)``.
    """
    if n < 1 or l <= 0 or k < 0 or epsilon <= 0:
        raise ValueError("need n >= 1, l > 0, k >= 0, epsilon > 0")
    edges = [{"id": "h", "from": "o", "length": "inf"}]
    edges += [{"id": f"e{i}", "from": "o", "to": f"v{i}", "length": l} for i in range(n)]
    g = build_graph({"vertices": ["o"] + [f"v{i}" for i in range(n)], "edges": edges})
    coef = epsilon**3 / (4 * l ** (2 * k + 2))
    pspec = [
        {"edge": f"e{i}", "kind": "monomial", "params": {"coefficient": coef, "exponent": 2 * k}}
        for i in range(n)
    ]
    return g, pspec


@dataclass(frozen=True)
class MassWindow:
    mu_beta_lo: float
    mu_beta_hi: float
    nonempty: bool
    beta: float

    @property
    def mu_lo(self) -> float:
        return self.mu_beta_lo ** (1 / self.beta)

    @property
    def mu_hi(self) -> float:
        return self.mu_beta_hi ** (1 / self.beta)

    def as_dict(self) -> dict:
        return {
            "mu_beta_lo": self.mu_beta_lo,
            "mu_beta_hi": self.mu_beta_hi,
            "mu_lo": self.mu_lo,
            "mu_hi": self.mu_hi,
            "nonempty": self.nonempty,
        }


def nfork_window(n: int, l: float, epsilon: float, p: float) -> MassWindow:
    """Masses with ``1/(n l eps) < mu^beta < eps/(2 l)`` on the fork.

    Emptiness is decided in exact rational arithmetic.  Floats are read
    through their shortest decimal representation, so ``0.1`` means 1/10
    and the boundary case ``n = 2 / epsilon**2`` comes out empty.
    """
    if n <= 0 or l <= 0 or epsilon <= 0:
        raise ValueError("inputs must be positive")
    n, l, eps = (_decimal_fraction(x) for x in (n, l, epsilon))
    lo = 1 / (n * l * eps)
    hi = eps / (2 * l)
    return MassWindow(float(lo), float(hi), lo < hi, Exponents(p).beta)


def _decimal_fraction(x) -> Fraction:
    return Fraction(x) if isinstance(x, (int, Fraction)) else Fraction(repr(float(x)))


# --- assumption H -------------------------------------------------------------------


def assumption_h(g: MetricGraph) -> bool:
    """Whether every point of the graph lies on a trail that contains two half-lines.

    Needs at least two half-lines.  Each finite edge is then checked by an
    exhaustive depth-first enumeration of trails (walks without repeated
    edges) leaving one half-line; a trail covers its edges once it reaches a
    vertex carrying a different half-line.  The search is exponential in the
    worst case and meant for small cores.
    """
    hl_at: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e in g.infinite_edges:
        hl_at[e.tail].append(e.id)
    if g.n_halflines < 2:
        return False
    finite = g.finite_edges
    if not finite:
        return True
    adj: dict[str, list[tuple[int, str]]] = {v: [] for v in g.vertices}
    for k, e in enumerate(finite):
        adj[e.tail].append((k, e.head))
        if e.head != e.tail:
            adj[e.head].append((k, e.tail))
    full = (1 << len(finite)) - 1
    covered = 0

    def dfs(v, start_hl, used):
        nonlocal covered
        if used and (used | covered) != covered and any(h != start_hl for h in hl_at[v]):
            covered |= used
        if covered == full:
            return True
        for k, nxt in adj[v]:
            bit = 1 << k
            if not used & bit and dfs(nxt, start_hl, used | bit):
                return True
        return False

    for verts, hls in hl_at.items():
        for h in hls:
            if dfs(verts, h, 0):
                return True
    return covered == full
