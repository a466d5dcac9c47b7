"""Normalized gradient flow for mass-constrained minimisers of the energy.

Each step moves along the L2 gradient of the discrete energy, clips the
result at zero and rescales it back to the prescribed mass.  Two time
discretisations are available:

``"implicit"`` (default)
    Backward Euler on the linearised operator,
    ``(M + tau (K - M diag(|u|^(p-2) + w))) u_new = M u``, the discrete
    normalized gradient flow of Bao and Du.  Stationary states are fixed
    points for every ``tau``, so large steps are allowed.
``"explicit"``
    ``u_new = u - tau grad E(u)`` with ``tau`` of order ``h**2``.

Either way an increase of the energy halves the step and the step is
retried, so accepted iterates have non-increasing energy.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.linalg import LinAlgError, solve_banded
from scipy.sparse.csgraph import reverse_cuthill_mckee
from scipy.sparse.linalg import splu

from .errors import MeshMismatch
from .functional import (
    EnergyBreakdown,
    energy,
    soliton_energy_threshold,
    soliton_params,
)
from .graph import GraphFunction, Mesh, PotentialField

log = logging.getLogger(__name__)

# banded elimination after bandwidth reduction beats general sparse LU on
# chain-like meshes; graphs with many edges at one vertex fall back to LU
_MAX_BANDWIDTH = 64


@dataclass(frozen=True)
class FlowParams:
    step: float | None = None
    max_iters: int = 3000
    energy_tol: float = 1e-10
    residual_tol: float = 1e-6
    seed: int = 0
    scheme: str = "implicit"
    max_step: float = 1e8
    min_step: float = 1e-14

    def __post_init__(self):
        if self.step is not None and not self.step > 0:
            raise ValueError("flow step must be positive")
        if not (self.energy_tol > 0 and self.residual_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.scheme not in ("implicit", "explicit"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True)
class StartRecord:
    label: str
    energy: float
    converged: bool
    iterations: int


@dataclass(frozen=True, eq=False)
class SolveReport:
    minimizer: GraphFunction
    energy: EnergyBreakdown
    mass: float
    multiplier: float
    residual: float
    iterations: int
    converged: bool
    delocalization: float
    threshold: float
    start: str = ""
    starts: tuple[StartRecord, ...] = ()
    energy_history: np.ndarray = field(default=None, repr=False)

    @property
    def gap(self) -> float:
        return self.energy.E - self.threshold

    def summary(self) -> dict:
        return {
            "energy": self.energy.as_dict(),
            "mass": self.mass,
            "threshold": self.threshold,
            "gap": self.gap,
            "multiplier": self.multiplier,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "delocalization": self.delocalization,
            "start": self.start,
            "starts": [vars(s) for s in self.starts],
        }


class _Discrete:
    """Arrays of the discrete energy on a fixed mesh and potential."""

    def __init__(self, mesh: Mesh, w: PotentialField | None, p: float):
        if w is not None and w.mesh is not mesh:
            raise MeshMismatch("potential and function live on different meshes")
        self.mesh = mesh
        self.p = float(p)
        self.free = np.flatnonzero(mesh.free)
        self.Mf = mesh.weights[self.free]
        self.Kf = mesh.stiffness[self.free][:, self.free].tocsc()
        self.pot_w = np.zeros(mesh.n_dofs) if w is None else mesh.core_weights * w.values
        self.pot_f = self.pot_w[self.free] / self.Mf
        self._band = None
        perm = reverse_cuthill_mckee(self.Kf.tocsr(), symmetric_mode=True)
        Kp = self.Kf.tocsr()[perm][:, perm].tocoo()
        bw = int(np.max(np.abs(Kp.row - Kp.col), initial=0))
        if bw <= _MAX_BANDWIDTH:
            band = np.zeros((2 * bw + 1, len(perm)))
            np.add.at(band, (bw + Kp.row - Kp.col, Kp.col), Kp.data)
            self._band = (perm, bw, band)

    def solve_shifted(self, tau, diag, rhs):
        """Solve ``(diag + tau K) x = rhs`` on the free DOFs; ``None`` if singular."""
        if self._band is not None:
            perm, bw, band = self._band
            ab = tau * band
            ab[bw] += diag[perm]
            try:
                xp = solve_banded((bw, bw), ab, rhs[perm], check_finite=False)
            except (LinAlgError, ValueError):
                return None
            x = np.empty_like(xp)
            x[perm] = xp
            return x if np.all(np.isfinite(x)) else None
        try:
            return splu((sp.diags(diag) + tau * self.Kf).tocsc()).solve(rhs)
        except RuntimeError:
            return None

    def mass(self, u):
        return float(np.dot(self.mesh.weights, u * u))

    def energy(self, u) -> float:
        m = self.mesh
        du = u[m.cell_b] - u[m.cell_a]
        T = np.sum(du * du / m.cell_len)
        V = np.dot(m.weights, np.abs(u) ** self.p)
        W = np.dot(self.pot_w, u * u)
        return float(0.5 * T - V / self.p - 0.5 * W)

    def nonlinear_coeff(self, uf):
        return np.abs(uf) ** (self.p - 2.0) + self.pot_f

    def gradient(self, u) -> np.ndarray:
        uf = u[self.free]
        g = np.zeros_like(u)
        g[self.free] = (self.Kf @ uf) / self.Mf - self.nonlinear_coeff(uf) * uf
        return g

    def normalise(self, u, mu):
        u = np.maximum(u, 0.0)
        m = self.mass(u)
        if not m > 0:
            return None
        return u * math.sqrt(mu / m)


def discrete_energy_gradient(u: GraphFunction, w: PotentialField | None, p: float) -> GraphFunction:
    """L2 gradient of the discrete energy: ``M^-1 dE/du``, zero on Dirichlet DOFs.

    Inside an edge this is the three-point ``-u'' - |u|^(p-2) u - w u``; at a
    vertex the stencil collects every incident edge, which is the weak form
    of the Kirchhoff condition.
    """
    return GraphFunction(u.mesh, _Discrete(u.mesh, w, p).gradient(u.values))


def delocalization_metric(u: GraphFunction, d0: float) -> float:
    """Fraction of the mass sitting on half-lines farther than ``d0`` from the core."""
    m = u.mesh
    total = float(np.dot(m.weights, u.values**2))
    if total == 0:
        return 0.0
    far = m.halfline_coord > d0
    return float(np.dot(m.weights[far], u.values[far] ** 2) / total)


def _default_step(disc: _Discrete, params: FlowParams, mu: float) -> float:
    if params.step is not None:
        return params.step
    if params.scheme == "explicit":
        return 0.4 * float(disc.mesh.cell_len.min()) ** 2
    omega = soliton_params(disc.p).frequency * mu ** (2 * soliton_params(disc.p).exponents.beta)
    return 0.5 / (omega + float(disc.pot_f.max(initial=0.0)))


def normalized_gradient_flow(
    u0: GraphFunction,
    w: PotentialField | None,
    p: float,
    mu: float,
    params: FlowParams = FlowParams(),
    *,
    d0: float | None = None,
    label: str = "",
) -> SolveReport:
    """Minimise the energy at mass ``mu`` starting from ``u0``.

    Running out of iterations is not an error; the report then carries
    ``converged=False``.
    """
    if mu <= 0:
        raise ValueError("mass must be positive")
    mesh = u0.mesh
    disc = _Discrete(mesh, w, p)
    u = disc.normalise(np.array(u0.values), mu)
    if u is None:
        raise ValueError("initial datum must have positive mass after clipping at zero")

    tau = _default_step(disc, params, mu)
    e = disc.energy(u)
    history = [e]
    converged = False
    it = 0
    lam = math.nan
    res = math.inf
    implicit = params.scheme == "implicit"
    free = disc.free
    while it < params.max_iters:
        it += 1
        uf = u[free]
        if implicit:
            coeff = disc.nonlinear_coeff(uf)
            x = disc.solve_shifted(tau, disc.Mf * (1.0 - tau * coeff), disc.Mf * uf)
            trial = None
            if x is not None:
                trial = np.zeros_like(u)
                trial[free] = x
        else:
            trial = u - tau * disc.gradient(u)
        trial = None if trial is None else disc.normalise(trial, mu)
        e_new = math.inf if trial is None else disc.energy(trial)
        if not e_new <= e + 1e-15 * abs(e):
            tau *= 0.5
            if tau < params.min_step:
                break
            continue
        de = abs(e_new - e) / max(abs(e_new), 1e-300)
        u, e = trial, e_new
        history.append(e)
        g = disc.gradient(u)
        lam = float(np.dot(mesh.weights, g * u)) / mu
        r = g - lam * u
        res = math.sqrt(float(np.dot(mesh.weights, r * r)) / mu)
        if de < params.energy_tol and res < params.residual_tol:
            converged = True
            break
        if implicit:
            cap = 0.9 / abs(lam) if lam < 0 else params.max_step
            tau = min(2.0 * tau, cap, params.max_step)
        else:
            tau = min(1.5 * tau, params.max_step)

    if math.isnan(lam):
        g = disc.gradient(u)
        lam = float(np.dot(mesh.weights, g * u)) / mu
        r = g - lam * u
        res = math.sqrt(float(np.dot(mesh.weights, r * r)) / mu)
    minimizer = GraphFunction(mesh, u)
    en = energy(minimizer, w, p)
    thr = soliton_energy_threshold(soliton_params(p), mu)
    return SolveReport(
        minimizer=minimizer,
        energy=en,
        mass=disc.mass(minimizer.values),
        multiplier=lam,
        residual=res,
        iterations=it,
        converged=converged,
        delocalization=delocalization_metric(minimizer, mesh.L / 4 if d0 is None else d0),
        threshold=thr,
        start=label,
        energy_history=np.array(history),
    )


# --- multistart -------------------------------------------------------------------


def _potential_peak(w: PotentialField | None) -> tuple[str, float] | None:
    if w is None or w.sup_norm == 0:
        return None
    from .criteria import potential_peak

    edge_id, lo, hi = potential_peak(w)
    coords = w.mesh.grid(edge_id).coords
    return edge_id, 0.5 * (coords[lo] + coords[hi])


def initial_guesses(
    mesh: Mesh, w: PotentialField | None, p: float, mu: float, seed: int = 0
) -> dict[str, GraphFunction]:
    """Starting points of the multistart search, keyed by label.

    ``escape``: soliton half way out on the first half-line;
    ``potential-max``: soliton centred where the potential peaks (or at the
    middle of the longest core edge);
    ``plateau``: the small-mass trial function, constant on the core;
    ``noise``: seeded random positive values under a soliton-width envelope.
    """
    from .criteria import candidate_small_mass

    sol = soliton_params(p)
    g = mesh.graph
    starts: dict[str, GraphFunction] = {}
    if g.infinite_edges:
        starts["escape"] = _soliton_at(sol, mu, mesh, (g.infinite_edges[0].id, mesh.L / 2))
    peak = _potential_peak(w)
    if peak is None and g.finite_edges:
        e = max(g.finite_edges, key=lambda e: e.length)
        peak = (e.id, e.length / 2)
    if peak is not None:
        starts["potential-max"] = _soliton_at(sol, mu, mesh, peak)
    if g.infinite_edges:
        starts["plateau"] = candidate_small_mass(mesh, p, mu)[0]
    rng = np.random.default_rng(seed)
    width = 1.0 / sol.inverse_width(mu)
    dist = mesh.halfline_coord
    envelope = np.exp(-dist / (2 * width))
    starts["noise"] = GraphFunction(mesh, rng.uniform(0.0, 1.0, mesh.n_dofs) * envelope)
    return starts


def _soliton_at(sol, mu, mesh, center):
    return GraphFunction(mesh, sol.profile(mesh.distance_from(*center), mu))


def multistart_minimize(
    mesh: Mesh,
    w: PotentialField | None,
    p: float,
    mu: float,
    params: FlowParams = FlowParams(),
    *,
    d0: float | None = None,
    starts: dict[str, GraphFunction] | None = None,
) -> SolveReport:
    """Run the flow from several initial data and keep the lowest energy.

    Converged runs are preferred; if none converged the lowest energy run
    is returned (with ``converged=False``).  This is a heuristic search for
    the global minimum, not a certificate.
    """
    if starts is None:
        starts = initial_guesses(mesh, w, p, mu, params.seed)
    reports = []
    for label, u0 in starts.items():
        rep = normalized_gradient_flow(u0, w, p, mu, params, d0=d0, label=label)
        log.info("start %-14s E=%.12g converged=%s iters=%d", label, rep.energy.E, rep.converged,
                 rep.iterations)
        reports.append(rep)
    records = tuple(StartRecord(r.start, r.energy.E, r.converged, r.iterations) for r in reports)
    pool = [r for r in reports if r.converged] or reports
    best = min(pool, key=lambda r: r.energy.E)
    return replace(best, starts=records)
