"""Mass windows on the n-fork where the nonexistence condition holds.

The window 1/(n l eps) < mu^beta < eps/(2 l) is nonempty exactly when
n eps^2 > 2; it is decided in exact rational arithmetic.
"""
from graphnls import nfork_build, nfork_window

for n, eps in [(1000, 0.1), (201, 0.1), (200, 0.1), (100, 0.1), (9, 0.5), (8, 0.5)]:
    win = nfork_window(n, 1.0, eps, 4.0)
    span = f"({win.mu_beta_lo:.6g}, {win.mu_beta_hi:.6g})" if win.nonempty else "empty"
    print(f"n={n:5d} eps={eps:4}  n eps^2 = {n * eps * eps:7.3f}  mu^beta window {span}")

g, pspec = nfork_build(5, 1.0, 2, 0.1)
print(f"\na 5-fork: {len(g.finite_edges)} finite edges, {g.n_halflines} half-line, "
      f"potential {pspec[0]['kind']} {pspec[0]['params']}")
