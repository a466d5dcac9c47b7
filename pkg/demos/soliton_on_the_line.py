"""Recover the p=4 soliton on the real line and watch the energy scale like mu^3.

The line is two half-lines glued at one vertex.  Without a potential the
ground state of mass mu is the sech soliton, with energy -mu^3/96.
"""
import numpy as np

from graphnls import build_mesh, line_graph, multistart_minimize, soliton_params
from graphnls.scan import Problem, solve_at

sol = soliton_params(4.0)
print(f"C_p = {sol.C_p:.15f}   (sqrt(2)/4 = {np.sqrt(2) / 4:.15f})")
print(f"c_p = {sol.c_p:.15f}")
print(f"theta_p = {sol.theta_p:.15f}   (1/96 = {1 / 96:.15f})")

mesh = build_mesh(line_graph(), 1e-2, 40.0)
rep = multistart_minimize(mesh, None, 4.0, 1.0)
print(f"\nunit mass, h=1e-2: E = {rep.energy.E:.10f}, lambda = {rep.multiplier:.6f}, "
      f"start '{rep.start}', {rep.iterations} iterations")
for s in rep.starts:
    print(f"  start {s.label:<8} E = {s.energy:.10f}  converged {s.converged}")

# mesh and truncation picked per mass from the soliton width
problem = Problem(line_graph())
print("\n   mu        E_min          -mu^3/96     rel err")
for mu in (0.5, 1.0, 2.0, 4.0):
    rep, mesh, _ = solve_at(problem, 4.0, mu)
    exact = -mu**3 / 96
    print(f"{mu:5.1f}  {rep.energy.E:14.8f}  {exact:14.8f}  {abs(rep.energy.E / exact - 1):.1e}   (h={mesh.h:.3g})")
