"""Masses, energies, the line soliton and the functional inequalities.

All integrals are discrete: the mass, the nonlinear term and the potential
term use the trapezoidal weights of the mesh, the kinetic term uses forward
differences on every grid cell (the exact kinetic energy of the piecewise
linear interpolant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import EmptyCore, InvalidP, MeshMismatch, NotUnitMass
from .graph import GraphFunction, Mesh, MetricGraph, PotentialField


def _check_p(p: float) -> float:
    p = float(p)
    if not 2.0 < p < 6.0:
        raise InvalidP(f"nonlinearity power must satisfy 2 < p < 6, got {p}")
    return p


@dataclass(frozen=True)
class Exponents:
    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))

    @property
    def alpha(self) -> float:
        return 2.0 / (6.0 - self.p)

    @property
    def beta(self) -> float:
        return (self.p - 2.0) / (6.0 - self.p)

    @property
    def energy_power(self) -> float:
        """Power of the mass in the soliton energy, ``2 beta + 1``."""
        return 2.0 * self.beta + 1.0


@dataclass(frozen=True)
class SolitonParams:
    """Constants of the unit-mass line soliton ``C sech^(alpha/beta)(c x)``.

    ``frequency`` is the value ``omega`` in ``-phi'' - phi^(p-1) = -omega phi``
    for the unit-mass soliton; at mass ``mu`` it becomes
    ``omega * mu**(2 beta)``.
    """

    exponents: Exponents
    C_p: float
    c_p: float
    theta_p: float
    frequency: float

    @property
    def p(self) -> float:
        return self.exponents.p

    def amplitude(self, mu: float) -> float:
        return mu**self.exponents.alpha * self.C_p

    def inverse_width(self, mu: float) -> float:
        return self.c_p * mu**self.exponents.beta

    def profile(self, x: np.ndarray, mu: float) -> np.ndarray:
        ex = self.exponents
        y = np.abs(np.asarray(x, dtype=float)) * self.inverse_width(mu)
        # sech^s(y) = (2 e^{-y} / (1 + e^{-2y}))^s, overflow free
        s = ex.alpha / ex.beta
        z = np.exp(-y)
        return self.amplitude(mu) * (2.0 * z / (1.0 + z * z)) ** s

    def decay_length(self, mu: float, ratio: float = 1e-12) -> float:
        """Distance beyond which the soliton drops below ``ratio`` times its peak."""
        ex = self.exponents
        s = ex.alpha / ex.beta
        # sech^s(y) <= (2 e^{-y})^s
        y = math.log(2.0) - math.log(ratio) / s
        return y / self.inverse_width(mu)


def _sech_power_integral(s: float) -> float:
    """Integral of sech(y)**s over the real line, by adaptive quadrature."""
    val, _ = quad(lambda y: (2.0 * math.exp(-y) / (1.0 + math.exp(-2.0 * y))) ** s, 0.0, math.inf,
                  epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * val


@lru_cache(maxsize=None)
def soliton_params(p: float) -> SolitonParams:
    """Constants of the line soliton for the power ``p``.

    The profile ``A sech^(2/(p-2))(B x)`` solves the stationary equation
    ``-phi'' - phi^(p-1) = -omega phi`` exactly when ``B = (p-2) sqrt(omega) / 2``
    and ``A^(p-2) = p omega / 2``.  The frequency is then fixed by a root
    search on the unit-mass condition, and ``theta_p`` is the negative of
    the energy of the resulting profile, both integrals by quadrature.
    """
    ex = Exponents(p)
    p = ex.p
    s_mass = 4.0 / (p - 2.0)
    sech_int = _sech_power_integral(s_mass)

    def amp_width(omega):
        return (p * omega / 2.0) ** (1.0 / (p - 2.0)), (p - 2.0) * math.sqrt(omega) / 2.0

    def log_mass(log_omega):
        log_a = (math.log(p / 2.0) + log_omega) / (p - 2.0)
        log_b = math.log((p - 2.0) / 2.0) + 0.5 * log_omega
        return 2.0 * log_a - log_b + math.log(sech_int)

    lo, hi = -1.0, 1.0
    while log_mass(lo) > 0 and lo > -1e4:
        lo *= 2.0
    while log_mass(hi) < 0 and hi < 1e4:
        hi *= 2.0
    log_omega = brentq(log_mass, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    omega = math.exp(log_omega)
    A, B = amp_width(omega)
    if not (omega > 0 and 0 < A < math.inf and 0 < B < math.inf):
        raise InvalidP(f"p={p} is too close to a critical power for double precision")

    sd = 2.0 / (p - 2.0)

    def sech(y):
        return 2.0 * math.exp(-y) / (1.0 + math.exp(-2.0 * y))

    # in y = B x: phi' = -A B sd sech^sd(y) tanh(y), so T = A^2 B sd^2 int(...) dy
    # and V = (A^p / B) int sech^(p sd) dy; integrating in y keeps quad on a
    # unit scale even when the soliton is very wide (p close to 6)
    def kinetic(y):
        return (sech(y) ** sd * math.tanh(y)) ** 2

    def nonlinear(y):
        return sech(y) ** (p * sd)

    opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)
    T = 2.0 * A * A * B * sd * sd * quad(kinetic, 0.0, math.inf, **opts)[0]
    V = 2.0 * A**p / B * quad(nonlinear, 0.0, math.inf, **opts)[0]
    theta = -(0.5 * T - V / p)
    return SolitonParams(ex, C_p=A, c_p=B, theta_p=theta, frequency=omega)


def soliton_energy_threshold(params: SolitonParams, mu: float) -> float:
    """Energy ``-theta_p mu^(2 beta + 1)`` of the line soliton of mass ``mu``."""
    if mu < 0:
        raise ValueError("mass must be nonnegative")
    if mu == 0:
        return 0.0
    return -params.theta_p * mu**params.exponents.energy_power


def soliton(
    params: SolitonParams,
    mu: float,
    mesh: Mesh,
    center: tuple[str, float] | None = None,
) -> GraphFunction:
    """Soliton of mass ``mu`` sampled as a function of the graph distance to ``center``.

    ``center`` is ``(edge_id, coordinate)``; by default the first vertex.
    On the line graph this is the usual ``phi_mu(x - x0)``.
    """
    if mu <= 0:
        raise ValueError("mass must be positive")
    if center is None:
        dist = mesh.distance_from_vertex(mesh.graph.vertices[0])
    else:
        dist = mesh.distance_from(*center)
    return GraphFunction(mesh, params.profile(dist, mu))


# --- masses and energies ------------------------------------------------------


@dataclass(frozen=True)
class EnergyBreakdown:
    T: float
    V: float
    W: float
    p: float

    @property
    def E_nls(self) -> float:
        return 0.5 * self.T - self.V / self.p

    @property
    def E(self) -> float:
        return self.E_nls - 0.5 * self.W

    def as_dict(self) -> dict[str, float]:
        return {"T": self.T, "V": self.V, "W": self.W, "E": self.E, "E_nls": self.E_nls}


def mass(u: GraphFunction) -> float:
    return float(np.dot(u.mesh.weights, u.values**2))


def kinetic(u: GraphFunction) -> float:
    m = u.mesh
    du = u.values[m.cell_b] - u.values[m.cell_a]
    return float(np.sum(du * du / m.cell_len))


def lp_norm_power(u: GraphFunction, p: float, weights: np.ndarray | None = None) -> float:
    w = u.mesh.weights if weights is None else weights
    return float(np.dot(w, np.abs(u.values) ** p))


def potential_term(u: GraphFunction, w: PotentialField) -> float:
    if w.mesh is not u.mesh:
        raise MeshMismatch("potential and function live on different meshes")
    return float(np.dot(u.mesh.core_weights * w.values, u.values**2))


def energy(u: GraphFunction, w: PotentialField | None, p: float) -> EnergyBreakdown:
    p = _check_p(p)
    W = 0.0 if w is None else potential_term(u, w)
    return EnergyBreakdown(T=kinetic(u), V=lp_norm_power(u, p), W=W, p=p)


# --- inequalities ---------------------------------------------------------------


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    satisfied: bool

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def gn_linf_check(u: GraphFunction, rtol: float = 1e-6) -> InequalityReport:
    """Sup-norm Gagliardo-Nirenberg bound ``|u|_inf^2 <= 2 |u|_2 |u'|_2``."""
    lhs = float(np.max(u.values**2, initial=0.0))
    rhs = 2.0 * math.sqrt(mass(u)) * math.sqrt(kinetic(u))
    return InequalityReport(lhs, rhs, lhs <= rhs * (1.0 + rtol) + 1e-300)


def gn_ratio(u: GraphFunction, p: float) -> float:
    """Empirical ratio ``|u|_p^p / (|u|_2^(p/2+1) |u'|_2^(p/2-1))``.

    Only a diagnostic: the optimal constant of this inequality is not known
    in closed form, so nothing is asserted against it.
    """
    num = lp_norm_power(u, p)
    den = mass(u) ** ((p / 2 + 1) / 2) * kinetic(u) ** ((p / 2 - 1) / 2)
    return num / den if den > 0 else math.nan


def _core_norm(u: GraphFunction, r: float) -> float:
    cw = u.mesh.core_weights
    on_core = cw > 0
    if math.isinf(r):
        return float(np.max(np.abs(u.values[on_core]), initial=0.0))
    return float(np.dot(cw, np.abs(u.values) ** r) ** (1.0 / r))


def holder_check(u: GraphFunction, r: float, p: float, rtol: float = 1e-6) -> InequalityReport:
    """``|u|_{L^r(K)} <= |u|_{L^p(K)} |K|^(1/r - 1/p)`` on the compact core."""
    if not 1.0 <= r <= p:
        raise ValueError(f"need 1 <= r <= p, got r={r}, p={p}")
    total = float(u.mesh.core_weights.sum())
    if total == 0:
        raise EmptyCore("the graph has no finite edges")
    s = (0.0 if math.isinf(r) else 1.0 / r) - (0.0 if math.isinf(p) else 1.0 / p)
    lhs = _core_norm(u, r)
    rhs = _core_norm(u, p) * total**s
    return InequalityReport(lhs, rhs, lhs <= rhs * (1.0 + rtol) + 1e-300)


# --- scaling ------------------------------------------------------------------------


def rescale(
    u: GraphFunction, w: PotentialField | None, t: float, p: float
) -> tuple[GraphFunction, MetricGraph, PotentialField | None]:
    """Mass-scaling map: lengths times ``t^-beta``, ``u -> t^alpha u(t^beta x)``, ``w -> t^(2 beta) w(t^beta x)``.

    The grid is carried along, so sample values are multiplied and nothing
    is interpolated; mass goes from ``mu`` to ``t mu`` and the energy picks
    up the factor ``t^(2 beta + 1)``.
    """
    if t <= 0:
        raise ValueError("scaling parameter must be positive")
    ex = Exponents(p)
    mesh_t = u.mesh.scaled(t ** (-ex.beta))
    u_t = GraphFunction(mesh_t, u.values * t**ex.alpha)
    w_t = None if w is None else PotentialField(mesh_t, w.values * t ** (2 * ex.beta))
    return u_t, mesh_t.graph, w_t


def mass_parametrized_energy(
    u_unit: GraphFunction, w: PotentialField | None, p: float, mu: float, tol: float = 1e-8
) -> float:
    """``f(mu) = E(sqrt(mu) u)`` for a unit-mass ``u``."""
    m = mass(u_unit)
    if abs(m - 1.0) > tol:
        raise NotUnitMass(f"expected unit mass, got {m}")
    if mu <= 0:
        raise ValueError("mass must be positive")
    e = energy(u_unit, w, p)
    return 0.5 * mu * e.T - mu ** (p / 2) / p * e.V - 0.5 * mu * e.W
