"""Explicit trial functions that beat the soliton level.

For large mass a narrow soliton piece parked on the plateau of the potential
gains about kappa*mu/2 over the threshold.  For small mass a function that is
flat on the core and has soliton tails on the half-lines wins, with a margin
of order m^(2 alpha) set by the integral of w.
"""
import numpy as np

from graphnls import (build_mesh, candidate_large_mass, existence_criterion, sample_potential,
                      small_mass_inequality, soliton_params, two_bridge_graph)
from graphnls.criteria import large_mass_site
from graphnls.scan import auto_resolution

BUMP = [{"edge": "core", "kind": "bump",
         "params": {"center": 0.5, "width": 0.5, "height": 1.0, "ramp": 0.25}}]
g = two_bridge_graph()

print("large mass (plateau of height 1, so gap/mu should approach -1/2)")
for mu in (10.0, 50.0, 100.0, 300.0, 1000.0):
    h, _ = auto_resolution(g, 4.0, mu, points_per_width=300.0)
    mesh = build_mesh(g, h, max(2.0, 10 * h))
    w = sample_potential(mesh, BUMP)
    site = large_mass_site(w, floor_fraction=1.0)
    rep = existence_criterion(candidate_large_mass(w, 4.0, mu, floor_fraction=1.0), w, 4.0)
    print(f"  mu={mu:7.1f}  gap/mu={rep.gap / mu:8.4f}  passed={rep.passed}  "
          f"(interval {site.center - site.half_width:.3f}..{site.center + site.half_width:.3f}, kappa={site.kappa:g})")

mesh = build_mesh(g, 1e-3, 2.0)
w = sample_potential(mesh, BUMP)
m = np.geomspace(1e-6, 1.0, 7)
rep = small_mass_inequality(g, 4.0, m, w)
limit = -soliton_params(4.0).C_p**2 * w.integral / 2
print(f"\nsmall mass (integral of w = {w.integral:.6f}, limiting ratio {limit:.6f})")
for mi, ok, r in zip(m, rep.satisfied, rep.ratio):
    print(f"  m={mi:7.0e}  satisfied={bool(ok)}  ratio={r:.6f}")
