"""Fast consistency checks behind ``graphnls selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .functional import (
    energy,
    gn_linf_check,
    holder_check,
    mass,
    rescale,
    soliton_params,
)
from .graph import build_mesh, line_graph, sample_potential, two_bridge_graph
from .rearrange import graph_norm, monotone_rearrangement, polya_szego_check
from .solver import FlowParams, discrete_energy_gradient, normalized_gradient_flow


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_function(mesh, rng, n_bumps=3):
    """Sum of a few positive Gaussian bumps placed by graph distance."""
    vals = np.zeros(mesh.n_dofs)
    for _ in range(n_bumps):
        gr = mesh.grids[rng.integers(len(mesh.grids))]
        x = rng.uniform(gr.coords[0], gr.coords[-1])
        d = mesh.distance_from(gr.edge.id, x)
        vals += rng.uniform(0.2, 2.0) * np.exp(-((d / rng.uniform(0.1, 1.0)) ** 2))
    return mesh.function(vals)


def _soliton_recovery(sol) -> CheckResult:
    mesh = build_mesh(line_graph(), 1e-2, 40.0)
    d = mesh.distance_from_vertex("o")
    u0 = mesh.function(np.exp(-d**2 / 8))
    rep = normalized_gradient_flow(u0, None, 4.0, 1.0, FlowParams())
    target = -sol.theta_p
    e_err = abs(rep.energy.E - target) / abs(target)
    u = rep.minimizer.values
    # the flow keeps the even symmetry of the start, so the peak stays at the vertex
    sup = float(np.max(np.abs(u - sol.profile(d, 1.0))))
    ok = rep.converged and e_err < 1e-3 and sup < 1e-2
    return CheckResult("soliton recovery (h=1e-2)", ok, f"rel energy err {e_err:.2e}, sup diff {sup:.2e}")


def run_selftest(corrupt_soliton: float = 0.0, samples: int = 100, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    sol = soliton_params(4.0)
    if corrupt_soliton:
        sol = replace(sol, C_p=sol.C_p * (1 + corrupt_soliton), theta_p=sol.theta_p * (1 + corrupt_soliton))
    results = []

    consts = (abs(sol.C_p - math.sqrt(2) / 4), abs(sol.c_p - 0.25), abs(sol.theta_p - 1 / 96))
    results.append(CheckResult("soliton constants p=4", max(consts) < 1e-10,
                               "max abs err {:.1e}".format(max(consts))))
    results.append(_soliton_recovery(sol))

    mesh = build_mesh(two_bridge_graph(), 0.02, 4.0)
    w = sample_potential(mesh, [{"edge": "core", "kind": "bump",
                                 "params": {"center": 0.5, "width": 0.5, "height": 1.0, "ramp": 0.25}}])
    bad = {"gn": 0, "holder": 0, "equimeasurable": 0, "polya-szego": 0}
    for _ in range(samples):
        u = random_function(mesh, rng)
        bad["gn"] += not gn_linf_check(u).satisfied
        bad["holder"] += not holder_check(u, 2.0, 4.0).satisfied
        us = monotone_rearrangement(u)
        for r in (1.0, 2.0, 4.0, math.inf):
            a, b = graph_norm(u, r), us.norm(r)
            if abs(a - b) > 1e-8 * a:
                bad["equimeasurable"] += 1
                break
        bad["polya-szego"] += not polya_szego_check(u).satisfied
    for k, n in bad.items():
        results.append(CheckResult(f"{k} ({samples} samples)", n == 0, f"{n} violations"))

    worst_e = worst_m = 0.0
    for _ in range(20):
        p = float(rng.choice([3.0, 4.0, 5.0]))
        t = float(rng.choice([0.5, 2.0, 10.0]))
        u = random_function(mesh, rng)
        ut, _, wt = rescale(u, w, t, p)
        mu, mut = mass(u), mass(ut)
        beta = (p - 2) / (6 - p)
        e0 = energy(u, w, p).E / mu ** (2 * beta + 1)
        e1 = energy(ut, wt, p).E / mut ** (2 * beta + 1)
        worst_e = max(worst_e, abs(e1 - e0) / abs(e0))
        worst_m = max(worst_m, abs(mut - t * mu) / (t * mu))
    results.append(CheckResult("scaling invariance", worst_e < 1e-5 and worst_m < 1e-8,
                               f"energy {worst_e:.1e}, mass {worst_m:.1e}"))

    worst = 0.0
    for _ in range(20):
        u = random_function(mesh, rng)
        dvec = random_function(mesh, rng).values * rng.choice([-1.0, 1.0], mesh.n_dofs)
        dvec[mesh.dirichlet] = 0.0
        g = discrete_energy_gradient(u, w, 4.0).values
        analytic = float(np.dot(mesh.weights, g * dvec))
        eps = 1e-6 * np.linalg.norm(u.values)
        fp = energy(u.with_values(u.values + eps * dvec), w, 4.0).E
        fm = energy(u.with_values(u.values - eps * dvec), w, 4.0).E
        fd = (fp - fm) / (2 * eps)
        worst = max(worst, abs(fd - analytic) / max(abs(analytic), 1e-12))
    results.append(CheckResult("energy gradient", worst < 1e-6, f"max rel err {worst:.1e}"))
    return results
