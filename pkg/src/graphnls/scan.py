"""Mass scans: minimum energy against the soliton threshold on a grid of masses."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .functional import soliton_params
from .graph import Mesh, MetricGraph, PotentialField, build_mesh, compact_core, curvature_potential, sample_potential
from .solver import FlowParams, SolveReport, multistart_minimize


class RowClass(str, Enum):
    SUB_THRESHOLD = "SUB_THRESHOLD"
    AT_THRESHOLD = "AT_THRESHOLD"
    NOT_CONVERGED = "NOT_CONVERGED"


def classify(gap: float, threshold: float, converged: bool, gap_tol: float = 1e-4) -> RowClass:
    """``gap_tol`` is relative to ``|threshold|``.  Rows above the band are
    reported as not converged: a minimiser cannot sit above the threshold."""
    if not converged:
        return RowClass.NOT_CONVERGED
    band = gap_tol * abs(threshold)
    if gap < -band:
        return RowClass.SUB_THRESHOLD
    if abs(gap) <= band:
        return RowClass.AT_THRESHOLD
    return RowClass.NOT_CONVERGED


@dataclass(frozen=True)
class ScanRow:
    mu: float
    E_min: float
    threshold: float
    gap: float
    cls: RowClass
    deloc: float
    multiplier: float
    converged: bool
    h: float
    L: float

    CSV_HEADER = "mu,E_min,threshold,gap,class,deloc,lambda"

    def csv(self) -> str:
        f = lambda x: format(x, ".17g")  # noqa: E731
        return ",".join(
            [f(self.mu), f(self.E_min), f(self.threshold), f(self.gap), self.cls.value,
             f(self.deloc), f(self.multiplier)]
        )


@dataclass(frozen=True)
class Problem:
    """Graph plus the recipe for its potential, so meshes can be rebuilt per mass."""

    graph: MetricGraph
    potential: tuple = ()  # entries as accepted by sample_potential
    curvature: tuple = ()

    def potential_on(self, mesh: Mesh) -> PotentialField | None:
        if not self.potential and not self.curvature:
            return None
        w = sample_potential(mesh, [dict(e) for e in self.potential])
        if self.curvature:
            c = curvature_potential(mesh, dict(self.curvature))
            w = PotentialField(mesh, w.values + c.values)
        return w


def auto_resolution(
    g: MetricGraph, p: float, mu: float, points_per_width: float = 100.0, decay: float = 1e-12
) -> tuple[float, float]:
    """Spacing and truncation length adapted to the soliton of mass ``mu``.

    ``h`` puts ``points_per_width`` grid points in one soliton width and at
    least 20 cells on every core edge; ``L`` is where the soliton has decayed
    to ``decay`` times its peak.
    """
    sol = soliton_params(p)
    width = 1.0 / sol.inverse_width(mu)
    h = width / points_per_width
    finite = g.finite_edges
    if finite:
        h = min(h, min(e.length for e in finite) / 20.0)
    L = max(sol.decay_length(mu, decay), 10 * h)
    return h, L


def solve_at(
    problem: Problem,
    p: float,
    mu: float,
    params: FlowParams = FlowParams(),
    h: float | None = None,
    L: float | None = None,
) -> tuple[SolveReport, Mesh, PotentialField | None]:
    h0, L0 = auto_resolution(problem.graph, p, mu)
    h = h0 if h is None else h
    L = max(L0, 10 * h) if L is None else L
    mesh = build_mesh(problem.graph, h, L)
    w = problem.potential_on(mesh)
    return multistart_minimize(mesh, w, p, mu, params), mesh, w


def _row(args) -> ScanRow:
    problem, p, mu, params, h, L, gap_tol = args
    rep, mesh, _ = solve_at(problem, p, mu, params, h, L)
    return ScanRow(
        mu=mu,
        E_min=rep.energy.E,
        threshold=rep.threshold,
        gap=rep.gap,
        cls=classify(rep.gap, rep.threshold, rep.converged, gap_tol),
        deloc=rep.delocalization,
        multiplier=rep.multiplier,
        converged=rep.converged,
        h=mesh.h,
        L=mesh.L,
    )


def mass_grid(mu_min: float, mu_max: float, steps: int) -> np.ndarray:
    if not (0 < mu_min < mu_max) or steps < 2:
        raise ValueError("need 0 < mu_min < mu_max and steps >= 2")
    return np.geomspace(mu_min, mu_max, steps)


def scan_mass(
    problem: Problem,
    p: float,
    masses,
    params: FlowParams = FlowParams(),
    *,
    h: float | None = None,
    L: float | None = None,
    gap_tol: float = 1e-4,
    jobs: int = 1,
) -> list[ScanRow]:
    """One row per mass, in the order given.  Rows are independent, so
    ``jobs > 1`` farms them out to worker processes."""
    tasks = [(problem, p, float(mu), params, h, L, gap_tol) for mu in masses]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_row, tasks))
    return [_row(t) for t in tasks]


def threshold_estimates(rows: list[ScanRow]) -> tuple[float | None, float | None]:
    """Largest scanned mass up to which every row is sub-threshold, and the
    smallest one from which every row is sub-threshold (``None`` if absent)."""
    sub = [r.cls is RowClass.SUB_THRESHOLD for r in rows]
    lower = None
    for r, ok in zip(rows, sub):
        if not ok:
            break
        lower = r.mu
    upper = None
    for r, ok in zip(reversed(rows), reversed(sub)):
        if not ok:
            break
        upper = r.mu
    return lower, upper


def concavity_defects(x, f) -> np.ndarray:
    """``2 (chord - f)`` at the interior points of a nonuniform grid.

    The chord is the straight line through the two neighbours; a concave
    function lies on or above it, so positive entries flag convexity.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if len(x) < 3:
        return np.zeros(0)
    t = (x[1:-1] - x[:-2]) / (x[2:] - x[:-2])
    chord = (1 - t) * f[:-2] + t * f[2:]
    return 2.0 * (chord - f[1:-1])


def sub_threshold_segments(rows: list[ScanRow]) -> list[list[ScanRow]]:
    segs, cur = [], []
    for r in rows:
        if r.cls is RowClass.SUB_THRESHOLD:
            cur.append(r)
        else:
            if cur:
                segs.append(cur)
            cur = []
    if cur:
        segs.append(cur)
    return segs


def max_relative_concavity_defect(rows: list[ScanRow]) -> float:
    """Largest ``defect / |E_min|`` over the sub-threshold segments (``-inf`` if none)."""
    worst = -math.inf
    for seg in sub_threshold_segments(rows):
        d = concavity_defects([r.mu for r in seg], [r.E_min for r in seg])
        if d.size:
            worst = max(worst, float(np.max(d / np.abs([r.E_min for r in seg[1:-1]]))))
    return worst


def core_summary(g: MetricGraph) -> dict:
    c = compact_core(g)
    return {"core_length": c.total_length, "core_diameter": c.diameter, "halflines": g.n_halflines}
