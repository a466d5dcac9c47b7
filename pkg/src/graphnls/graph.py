"""Metric graphs with half-lines, their compact cores, meshes and fields.

A graph is given by vertices and edges; an edge is either a segment of
finite length joining two vertices or a half-line hanging off a single
vertex.  Functions on the graph are discretised on a :class:`Mesh` made of
one uniform grid per edge.  Grid points sitting on a common vertex share a
single degree of freedom, so continuity at vertices is built into the
discretisation and the Kirchhoff condition comes out of the energy.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra, shortest_path

from .errors import (
    CurvatureOnInfiniteEdge,
    DanglingVertexReference,
    DisconnectedGraph,
    InvalidEdge,
    InvalidResolution,
    NegativePotentialValue,
    NonpositiveLength,
    PotentialOnInfiniteEdge,
)

log = logging.getLogger(__name__)

INFINITY_MARKERS = ("inf", "infinity", "infinite", "+inf")


@dataclass(frozen=True)
class Edge:
    """An edge ``[0, length]``; coordinate 0 sits at ``tail``.

    Half-lines have ``length == inf`` and ``head is None``.
    """

    id: str
    tail: str
    head: str | None
    length: float

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.length)

    @property
    def is_loop(self) -> bool:
        return self.head == self.tail


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    @cached_property
    def _edge_index(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self._edge_index[edge_id]]

    def edge_position(self, edge_id: str) -> int:
        return self._edge_index[edge_id]

    @property
    def finite_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if not e.is_infinite)

    @property
    def infinite_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_infinite)

    @property
    def n_halflines(self) -> int:
        return len(self.infinite_edges)

    @property
    def is_noncompact(self) -> bool:
        return self.n_halflines > 0

    def scaled(self, factor: float) -> MetricGraph:
        """Return the graph with every length multiplied by ``factor``."""
        edges = tuple(
            Edge(e.id, e.tail, e.head, e.length if e.is_infinite else e.length * factor)
            for e in self.edges
        )
        return MetricGraph(self.vertices, edges)

    def relabeled(self, mapping: Mapping[str, str]) -> MetricGraph:
        edges = tuple(Edge(mapping.get(e.id, e.id), e.tail, e.head, e.length) for e in self.edges)
        return MetricGraph(self.vertices, edges)


def _parse_length(raw: Any, edge_id: str) -> float:
    if isinstance(raw, str):
        if raw.strip().lower() in INFINITY_MARKERS:
            return math.inf
        try:
            raw = float(raw)
        except ValueError:
            raise NonpositiveLength(f"edge {edge_id!r}: unreadable length {raw!r}") from None
    if raw is None:
        raise NonpositiveLength(f"edge {edge_id!r}: missing length")
    length = float(raw)
    if math.isnan(length) or length <= 0:
        raise NonpositiveLength(f"edge {edge_id!r}: length must be positive, got {raw!r}")
    return length


def build_graph(spec: Mapping[str, Any]) -> MetricGraph:
    """Build a validated :class:`MetricGraph` from a mapping.

    ``spec`` holds ``vertices`` (a list of ids) and ``edges`` (a list of
    mappings with keys ``id``, ``from``, ``to`` and ``length``).  A length
    of ``"inf"`` makes the edge a half-line; its ``to`` entry must then be
    absent, null or ``"inf"``.
    """
    vertices = tuple(str(v) for v in spec.get("vertices", ()))
    if len(set(vertices)) != len(vertices):
        raise InvalidEdge("duplicate vertex ids")
    if not vertices:
        raise DisconnectedGraph("graph has no vertices")
    known = set(vertices)
    edges = []
    seen = set()
    for k, raw in enumerate(spec.get("edges", ())):
        edge_id = str(raw.get("id", f"e{k}"))
        if edge_id in seen:
            raise InvalidEdge(f"duplicate edge id {edge_id!r}")
        seen.add(edge_id)
        length = _parse_length(raw.get("length"), edge_id)
        tail = raw.get("from")
        head = raw.get("to")
        if tail is None or str(tail) not in known:
            raise DanglingVertexReference(f"edge {edge_id!r}: unknown vertex {tail!r}")
        tail = str(tail)
        if math.isinf(length):
            if head is not None and str(head).strip().lower() not in INFINITY_MARKERS:
                raise InvalidEdge(
                    f"edge {edge_id!r}: a half-line has one finite endpoint, got to={head!r}"
                )
            head = None
        else:
            if head is None or str(head) not in known:
                raise DanglingVertexReference(f"edge {edge_id!r}: unknown vertex {head!r}")
            head = str(head)
        edges.append(Edge(edge_id, tail, head, length))

    index = {v: i for i, v in enumerate(vertices)}
    rows = [index[e.tail] for e in edges if not e.is_infinite]
    cols = [index[e.head] for e in edges if not e.is_infinite]
    adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(vertices),) * 2)
    n_comp, _ = connected_components(adj, directed=False)
    if n_comp != 1:
        raise DisconnectedGraph(f"graph has {n_comp} connected components")
    return MetricGraph(vertices, tuple(edges))


# --- convenience constructors ------------------------------------------------


def line_graph() -> MetricGraph:
    """The real line, as two half-lines glued at vertex ``o``."""
    return build_graph(
        {
            "vertices": ["o"],
            "edges": [
                {"id": "left", "from": "o", "length": "inf"},
                {"id": "right", "from": "o", "length": "inf"},
            ],
        }
    )


def halfline_graph() -> MetricGraph:
    return build_graph({"vertices": ["o"], "edges": [{"id": "h", "from": "o", "length": "inf"}]})


def star_graph(n: int) -> MetricGraph:
    return build_graph(
        {
            "vertices": ["o"],
            "edges": [{"id": f"h{i}", "from": "o", "length": "inf"} for i in range(n)],
        }
    )


def two_bridge_graph(length: float = 1.0) -> MetricGraph:
    """Two vertices joined by a segment, each carrying one half-line."""
    return build_graph(
        {
            "vertices": ["a", "b"],
            "edges": [
                {"id": "core", "from": "a", "to": "b", "length": length},
                {"id": "ha", "from": "a", "length": "inf"},
                {"id": "hb", "from": "b", "length": "inf"},
            ],
        }
    )


# --- compact core -------------------------------------------------------------


@dataclass(frozen=True)
class CompactCore:
    edge_ids: tuple[str, ...]
    total_length: float
    diameter: float

    @property
    def is_empty(self) -> bool:
        return not self.edge_ids


def _vertex_distances(g: MetricGraph) -> tuple[dict[str, int], np.ndarray]:
    finite = g.finite_edges
    verts = sorted({e.tail for e in finite} | {e.head for e in finite}, key=g.vertices.index)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    best: dict[tuple[int, int], float] = {}
    for e in finite:
        i, j = index[e.tail], index[e.head]
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        best[key] = min(best.get(key, math.inf), e.length)
    rows = [k[0] for k in best]
    cols = [k[1] for k in best]
    mat = csr_matrix((list(best.values()), (rows, cols)), shape=(n, n))
    return index, shortest_path(mat, directed=False)


def compact_core(g: MetricGraph) -> CompactCore:
    """Finite edges of ``g`` with their total length and metric diameter.

    The diameter is the exact maximum of the distance between two points of
    the core, points inside edges included.  For a point at coordinate
    ``s`` on edge ``(a, b)`` the distance to a vertex ``c`` is
    ``min(s + D[a, c], len - s + D[b, c])``; maximising over the second point
    on an edge ``(c, d)`` gives ``(d(x, c) + d(x, d) + len2) / 2``, a concave
    piecewise-linear function of ``s`` whose maximum sits at a breakpoint.
    A point paired with another point of its own edge reaches at most
    ``(len + D[a, b]) / 2``.
    """
    finite = g.finite_edges
    if not finite:
        return CompactCore((), 0.0, 0.0)
    total = float(sum(e.length for e in finite))
    index, D = _vertex_distances(g)
    a = np.array([index[e.tail] for e in finite])
    b = np.array([index[e.head] for e in finite])
    ln = np.array([e.length for e in finite])

    diam = float(np.max((ln + D[a, b]) / 2.0))
    # distinct-edge pairs, vectorised over (first edge, second edge)
    A, C = np.meshgrid(np.arange(len(finite)), np.arange(len(finite)), indexing="ij")
    off = A != C
    A, C = A[off], C[off]
    if A.size:
        l1 = ln[A]
        l2 = ln[C]
        Dac, Dbc = D[a[A], a[C]], D[b[A], a[C]]
        Dad, Dbd = D[a[A], b[C]], D[b[A], b[C]]
        cand = [
            np.zeros_like(l1),
            l1,
            np.clip((l1 + Dbc - Dac) / 2.0, 0.0, l1),
            np.clip((l1 + Dbd - Dad) / 2.0, 0.0, l1),
        ]
        for s in cand:
            dc = np.minimum(s + Dac, l1 - s + Dbc)
            dd = np.minimum(s + Dad, l1 - s + Dbd)
            diam = max(diam, float(np.max((dc + dd + l2) / 2.0)))
    return CompactCore(tuple(e.id for e in finite), total, diam)


# --- mesh ---------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeGrid:
    edge: Edge
    dofs: np.ndarray
    coords: np.ndarray
    spacing: float


@dataclass(frozen=True, eq=False)
class Mesh:
    """Uniform per-edge grids glued at vertices.

    Half-lines are truncated at length ``L``; the last grid point there is a
    Dirichlet degree of freedom pinned to zero.  ``weights`` are the
    trapezoidal quadrature weights and ``core_weights`` the part of them
    that comes from finite edges.
    """

    graph: MetricGraph
    h: float
    L: float
    n_dofs: int
    vertex_dof: dict[str, int]
    grids: tuple[EdgeGrid, ...]
    cell_a: np.ndarray
    cell_b: np.ndarray
    cell_len: np.ndarray
    cell_edge: np.ndarray
    cell_core: np.ndarray
    weights: np.ndarray
    core_weights: np.ndarray
    dirichlet: np.ndarray
    halfline_coord: np.ndarray = field(repr=False)

    def grid(self, edge_id: str) -> EdgeGrid:
        return self.grids[self.graph.edge_position(edge_id)]

    @property
    def free(self) -> np.ndarray:
        return ~self.dirichlet

    @property
    def total_length(self) -> float:
        return float(self.cell_len.sum())

    @cached_property
    def adjacency(self) -> csr_matrix:
        n = self.n_dofs
        rows = np.concatenate([self.cell_a, self.cell_b])
        cols = np.concatenate([self.cell_b, self.cell_a])
        data = np.concatenate([self.cell_len, self.cell_len])
        return csr_matrix((data, (rows, cols)), shape=(n, n))

    @cached_property
    def stiffness(self) -> csr_matrix:
        """Matrix ``K`` with ``u @ K @ u`` equal to the discrete kinetic energy."""
        n = self.n_dofs
        k = 1.0 / self.cell_len
        a, b = self.cell_a, self.cell_b
        rows = np.concatenate([a, b, a, b])
        cols = np.concatenate([a, b, b, a])
        data = np.concatenate([k, k, -k, -k])
        return coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()

    @cached_property
    def on_halfline(self) -> np.ndarray:
        """True for DOFs strictly inside (or at the far end of) a half-line."""
        return self.halfline_coord > 0

    def locate(self, edge_id: str, x: float) -> tuple[int, int, float]:
        """Grid cell of ``edge_id`` holding coordinate ``x``: (dof, dof, fraction)."""
        gr = self.grid(edge_id)
        x = float(np.clip(x, gr.coords[0], gr.coords[-1]))
        k = min(int(x // gr.spacing), len(gr.coords) - 2)
        frac = (x - gr.coords[k]) / gr.spacing
        return int(gr.dofs[k]), int(gr.dofs[k + 1]), float(frac)

    def distance_from(self, edge_id: str, x: float) -> np.ndarray:
        """Graph distance of every DOF to the point at coordinate ``x`` of an edge."""
        i, j, frac = self.locate(edge_id, x)
        spacing = self.grid(edge_id).spacing
        dist = dijkstra(self.adjacency, directed=False, indices=[i, j])
        return np.minimum(dist[0] + frac * spacing, dist[1] + (1.0 - frac) * spacing)

    def distance_from_vertex(self, vertex: str) -> np.ndarray:
        return dijkstra(self.adjacency, directed=False, indices=self.vertex_dof[vertex])

    def sample(self, f: Callable[[Edge, np.ndarray], np.ndarray]) -> np.ndarray:
        """DOF values of ``f(edge, coords)`` evaluated edge by edge.

        Vertex DOFs take the value from the last edge visited.
        """
        out = np.zeros(self.n_dofs)
        for gr in self.grids:
            out[gr.dofs] = f(gr.edge, gr.coords)
        out[self.dirichlet] = 0.0
        return out

    def function(self, values: np.ndarray | float) -> GraphFunction:
        return GraphFunction(self, np.broadcast_to(np.asarray(values, dtype=float), (self.n_dofs,)))

    def scaled(self, factor: float) -> Mesh:
        """Same grid structure with every length multiplied by ``factor``."""
        g = self.graph.scaled(factor)
        grids = tuple(
            EdgeGrid(g.edges[k], gr.dofs, gr.coords * factor, gr.spacing * factor)
            for k, gr in enumerate(self.grids)
        )
        return Mesh(
            graph=g,
            h=self.h * factor,
            L=self.L * factor,
            n_dofs=self.n_dofs,
            vertex_dof=self.vertex_dof,
            grids=grids,
            cell_a=self.cell_a,
            cell_b=self.cell_b,
            cell_len=self.cell_len * factor,
            cell_edge=self.cell_edge,
            cell_core=self.cell_core,
            weights=self.weights * factor,
            core_weights=self.core_weights * factor,
            dirichlet=self.dirichlet,
            halfline_coord=self.halfline_coord * factor,
        )

    def rows(self, values: np.ndarray) -> Iterable[tuple[str, float, float]]:
        """``(edge_id, coordinate, value)`` for every grid point of every edge."""
        for gr in self.grids:
            for x, d in zip(gr.coords, gr.dofs):
                yield gr.edge.id, float(x), float(values[d])


def _n_cells(length: float, h: float) -> int:
    return max(1, math.ceil(length / h - 1e-9))


def build_mesh(g: MetricGraph, h: float, L: float) -> Mesh:
    """Mesh ``g`` with spacing at most ``h``, truncating half-lines at ``L``."""
    if not (h > 0 and math.isfinite(h)):
        raise InvalidResolution(f"grid spacing must be positive, got {h!r}")
    if not (L > 0 and math.isfinite(L)):
        raise InvalidResolution(f"truncation length must be positive, got {L!r}")
    if L < 2 * h:
        raise InvalidResolution(f"truncation length L={L} leaves no interior node at spacing h={h}")
    if L < 10 * h:
        log.warning("truncation length L=%g is shorter than 10*h=%g", L, 10 * h)

    vertex_dof = {v: i for i, v in enumerate(g.vertices)}
    next_dof = len(g.vertices)
    grids = []
    ca, cb, cl, ce = [], [], [], []
    dirichlet_dofs = []
    hl_dofs, hl_coord = [], []
    for k, e in enumerate(g.edges):
        length = L if e.is_infinite else e.length
        n = _n_cells(length, h)
        if e.is_loop:
            n = max(n, 3)
        spacing = length / n
        coords = np.arange(n + 1) * spacing
        coords[-1] = length
        interior = np.arange(next_dof, next_dof + n - 1)
        next_dof += n - 1
        if e.is_infinite:
            far = next_dof
            next_dof += 1
            dirichlet_dofs.append(far)
            dofs = np.concatenate([[vertex_dof[e.tail]], interior, [far]])
            hl_dofs.append(dofs[1:])
            hl_coord.append(coords[1:])
        else:
            dofs = np.concatenate([[vertex_dof[e.tail]], interior, [vertex_dof[e.head]]])
        dofs = dofs.astype(np.intp)
        grids.append(EdgeGrid(e, dofs, coords, spacing))
        ca.append(dofs[:-1])
        cb.append(dofs[1:])
        cl.append(np.full(n, spacing))
        ce.append(np.full(n, k))

    n_dofs = next_dof
    cell_a = np.concatenate(ca)
    cell_b = np.concatenate(cb)
    cell_len = np.concatenate(cl)
    cell_edge = np.concatenate(ce)
    cell_core = np.array([not g.edges[k].is_infinite for k in cell_edge], dtype=bool)
    weights = np.bincount(cell_a, cell_len / 2, n_dofs) + np.bincount(cell_b, cell_len / 2, n_dofs)
    cw = np.where(cell_core, cell_len / 2, 0.0)
    core_weights = np.bincount(cell_a, cw, n_dofs) + np.bincount(cell_b, cw, n_dofs)
    dirichlet = np.zeros(n_dofs, dtype=bool)
    dirichlet[dirichlet_dofs] = True
    halfline_coord = np.zeros(n_dofs)
    if hl_dofs:
        halfline_coord[np.concatenate(hl_dofs)] = np.concatenate(hl_coord)

    arrays = (cell_a, cell_b, cell_len, cell_edge, cell_core, weights, core_weights, dirichlet)
    for arr in arrays + (halfline_coord,):
        arr.setflags(write=False)
    return Mesh(
        graph=g,
        h=float(h),
        L=float(L),
        n_dofs=n_dofs,
        vertex_dof=vertex_dof,
        grids=tuple(grids),
        cell_a=cell_a,
        cell_b=cell_b,
        cell_len=cell_len,
        cell_edge=cell_edge,
        cell_core=cell_core,
        weights=weights,
        core_weights=core_weights,
        dirichlet=dirichlet,
        halfline_coord=halfline_coord,
    )


# --- fields on a mesh ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GraphFunction:
    """Real DOF values on a mesh; Dirichlet DOFs are forced to zero."""

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.mesh.n_dofs,):
            raise ValueError(f"expected {self.mesh.n_dofs} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("graph function values must be finite")
        vals[self.mesh.dirichlet] = 0.0
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values: np.ndarray) -> GraphFunction:
        return GraphFunction(self.mesh, values)

    def __neg__(self) -> GraphFunction:
        return self.with_values(-self.values)

    def __mul__(self, c: float) -> GraphFunction:
        return self.with_values(self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PotentialField:
    """Nonnegative potential living on the compact core.

    At a vertex shared by several core edges the DOF stores the average of
    the incident edge values weighted by their quadrature share, so that
    ``sum(core_weights * values * u**2)`` is the edge-by-edge trapezoid rule.
    """

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.mesh.n_dofs,):
            raise ValueError(f"expected {self.mesh.n_dofs} values, got shape {vals.shape}")
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise NegativePotentialValue("potential values must be finite and nonnegative")
        vals[self.mesh.core_weights == 0] = 0.0
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def sup_norm(self) -> float:
        return float(self.values.max(initial=0.0))

    @property
    def integral(self) -> float:
        """Trapezoid approximation of the integral of the potential over the core."""
        return float(np.dot(self.mesh.core_weights, self.values))

    @property
    def effective(self) -> np.ndarray:
        """Values seen by the L2 gradient: potential times the core share of each weight."""
        m = self.mesh
        return self.values * m.core_weights / m.weights

    @classmethod
    def zero(cls, mesh: Mesh) -> PotentialField:
        return cls(mesh, np.zeros(mesh.n_dofs))

    def scaled_by(self, c: float) -> PotentialField:
        return PotentialField(self.mesh, self.values * c)


PotentialSpec = Sequence[Mapping[str, Any]]


def _bump(x: np.ndarray, center: float, width: float, height: float, ramp: float) -> np.ndarray:
    d = np.abs(x - center) - width / 2.0
    out = np.where(d <= 0, height, 0.0)
    if ramp > 0:
        t = np.clip(d / ramp, 0.0, 1.0)
        out = np.where((d > 0) & (d < ramp), height * np.cos(0.5 * np.pi * t) ** 2, out)
    return out


def _primitive(kind: str, params: Mapping[str, Any], length: float, edge_id: str) -> Callable:
    kind = kind.lower()
    if kind == "constant":
        value = float(params.get("value", params.get("a", 0.0)))
        if value < 0:
            raise NegativePotentialValue(f"edge {edge_id!r}: constant {value} < 0")
        return lambda x: np.full_like(x, value)
    if kind == "bump":
        center = float(params.get("center", length / 2))
        width = float(params.get("width", 0.0))
        height = float(params["height"])
        ramp = float(params.get("ramp", 0.0))
        if height < 0:
            raise NegativePotentialValue(f"edge {edge_id!r}: bump height {height} < 0")
        if width < 0 or ramp < 0:
            raise ValueError(f"edge {edge_id!r}: bump width and ramp must be nonnegative")
        return lambda x: _bump(x, center, width, height, ramp)
    if kind == "monomial":
        coef = float(params["coefficient"])
        expo = float(params["exponent"])
        if coef < 0:
            raise NegativePotentialValue(f"edge {edge_id!r}: coefficient {coef} < 0")
        return lambda x: coef * x**expo
    if kind == "samples":
        vals = np.asarray(params["values"], dtype=float)
        if np.any(vals < 0):
            raise NegativePotentialValue(f"edge {edge_id!r}: negative sample")
        pos = np.linspace(0.0, length, len(vals))
        return lambda x: np.interp(x, pos, vals)
    if kind == "callable":
        fn = params["f"]
        return lambda x: np.asarray(fn(x), dtype=float) * np.ones_like(x)
    raise ValueError(f"edge {edge_id!r}: unknown potential kind {kind!r}")


def _field_from_edge_values(mesh: Mesh, per_edge: Mapping[str, np.ndarray]) -> PotentialField:
    acc = np.zeros(mesh.n_dofs)
    for edge_id, vals in per_edge.items():
        gr = mesh.grid(edge_id)
        local = np.full(len(gr.coords), gr.spacing)
        local[0] = local[-1] = gr.spacing / 2
        np.add.at(acc, gr.dofs, local * vals)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.where(mesh.core_weights > 0, acc / mesh.core_weights, 0.0)
    return PotentialField(mesh, vals)


def sample_potential(mesh: Mesh, pspec: PotentialSpec | None) -> PotentialField:
    """Sample a potential given as one primitive per core edge.

    Each entry of ``pspec`` is a mapping ``{"edge": id, "kind": kind,
    "params": {...}}`` where ``kind`` is ``constant`` (``value``), ``bump``
    (``center``, ``width``, ``height``, optional cosine shoulders ``ramp``),
    ``monomial`` (``coefficient * x**exponent``) or ``samples`` (values on a
    uniform grid of the edge).  Core edges not mentioned carry zero.
    """
    g = mesh.graph
    per_edge: dict[str, np.ndarray] = {}
    for entry in pspec or ():
        edge_id = str(entry["edge"])
        e = g.edge(edge_id)
        if e.is_infinite:
            raise PotentialOnInfiniteEdge(f"edge {edge_id!r} is a half-line")
        fn = _primitive(str(entry["kind"]), entry.get("params", {}) or {}, e.length, edge_id)
        vals = np.asarray(fn(mesh.grid(edge_id).coords), dtype=float)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise NegativePotentialValue(f"edge {edge_id!r}: potential must be nonnegative")
        per_edge[edge_id] = per_edge.get(edge_id, 0.0) + vals
    return _field_from_edge_values(mesh, per_edge)


def curvature_potential(
    mesh: Mesh, gamma: Mapping[str, float | Callable[[np.ndarray], np.ndarray]]
) -> PotentialField:
    """Thin-waveguide potential ``gamma**2 / 4`` from signed curvatures per core edge."""
    per_edge = {}
    for edge_id, gam in gamma.items():
        e = mesh.graph.edge(edge_id)
        if e.is_infinite:
            raise CurvatureOnInfiniteEdge(f"edge {edge_id!r} is a half-line")
        x = mesh.grid(edge_id).coords
        vals = gam(x) if callable(gam) else np.full_like(x, float(gam))
        per_edge[edge_id] = np.asarray(vals, dtype=float) ** 2 / 4.0
    return _field_from_edge_values(mesh, per_edge)
