"""Random graphs, meshes, functions and potentials for property tests."""

from __future__ import annotations

import numpy as np

from graphnls import build_graph, build_mesh
from graphnls.graph import PotentialField


def random_graph(rng: np.random.Generator, min_core_edges: int = 1, max_vertices: int = 4,
                 min_halflines: int = 1, max_halflines: int = 3):
    """Connected graph: random tree core, a few extra (possibly parallel) edges, half-lines."""
    nv = int(rng.integers(1 if min_core_edges == 0 else 2, max_vertices + 1))
    verts = [f"v{i}" for i in range(nv)]
    edges = []
    for i in range(1, nv):
        edges.append({"id": f"t{i}", "from": verts[int(rng.integers(i))], "to": verts[i],
                      "length": float(rng.uniform(0.5, 2.0))})
    for k in range(int(rng.integers(0, 3))):
        a, b = rng.choice(nv, 2, replace=nv < 2)
        if a == b:  # skip loops, keep the example small
            continue
        edges.append({"id": f"x{k}", "from": verts[a], "to": verts[b],
                      "length": float(rng.uniform(0.5, 2.0))})
    for k in range(int(rng.integers(min_halflines, max_halflines + 1))):
        edges.append({"id": f"h{k}", "from": verts[int(rng.integers(nv))], "length": "inf"})
    return build_graph({"vertices": verts, "edges": edges})


def random_mesh(rng, g=None, **kw):
    g = random_graph(rng, **kw) if g is None else g
    return build_mesh(g, float(rng.uniform(0.03, 0.1)), float(rng.uniform(3.0, 6.0)))


def smooth_function(mesh, rng, n_bumps=3):
    vals = np.zeros(mesh.n_dofs)
    for _ in range(n_bumps):
        gr = mesh.grids[int(rng.integers(len(mesh.grids)))]
        x = rng.uniform(gr.coords[0], gr.coords[-1])
        d = mesh.distance_from(gr.edge.id, x)
        vals += rng.uniform(0.2, 2.0) * np.exp(-((d / rng.uniform(0.2, 1.5)) ** 2))
    return mesh.function(vals)


def rough_function(mesh, rng):
    """Independent uniform nodal values, damped along half-lines."""
    vals = rng.uniform(0.0, 1.0, mesh.n_dofs) * np.exp(-mesh.halfline_coord)
    return mesh.function(vals)


def random_function(mesh, rng):
    return smooth_function(mesh, rng) if rng.uniform() < 0.6 else rough_function(mesh, rng)


def random_potential(mesh, rng, scale=1.0):
    vals = scale * rng.uniform(0.0, 1.0, mesh.n_dofs)
    return PotentialField(mesh, vals)
