import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphnls import (
    build_graph,
    build_mesh,
    compact_core,
    curvature_potential,
    halfline_graph,
    line_graph,
    nfork_build,
    sample_potential,
    star_graph,
    two_bridge_graph,
)
from graphnls.errors import (
    CurvatureOnInfiniteEdge,
    DanglingVertexReference,
    DisconnectedGraph,
    InvalidResolution,
    NegativePotentialValue,
    NonpositiveLength,
    PotentialOnInfiniteEdge,
)
from graphnls.graph import PotentialField

from oracles import brute_force_core
from strategies import random_graph, random_mesh


def test_two_bridge_from_spec():
    g = two_bridge_graph()
    assert g.n_halflines == 2
    assert [e.id for e in g.finite_edges] == ["core"]
    assert {e.tail for e in g.infinite_edges} == {"a", "b"}


def test_halfline_graph():
    g = halfline_graph()
    assert g.vertices == ("o",) and g.n_halflines == 1 and not g.finite_edges


def test_disconnected_rejected():
    spec = {
        "vertices": ["a", "b", "c", "d"],
        "edges": [{"id": "e", "from": "a", "to": "b", "length": 1},
                  {"id": "f", "from": "c", "to": "d", "length": 1}],
    }
    with pytest.raises(DisconnectedGraph):
        build_graph(spec)


@pytest.mark.parametrize("length", [0, -1.0, "abc", None])
def test_bad_length(length):
    with pytest.raises(NonpositiveLength):
        build_graph({"vertices": ["a", "b"], "edges": [{"id": "e", "from": "a", "to": "b", "length": length}]})


def test_dangling_vertex():
    with pytest.raises(DanglingVertexReference):
        build_graph({"vertices": ["a"], "edges": [{"id": "e", "from": "a", "to": "z", "length": 1}]})


def test_core_examples():
    c = compact_core(two_bridge_graph())
    assert (c.total_length, c.diameter) == (1.0, 1.0)
    g, _ = nfork_build(3, 2.0, 1, 0.1)
    c = compact_core(g)
    assert c.total_length == pytest.approx(6.0) and c.diameter == pytest.approx(4.0)
    assert brute_force_core(g) == pytest.approx((6.0, 4.0))
    c = compact_core(star_graph(3))
    assert c.is_empty and c.total_length == 0 and c.diameter == 0


def test_cycle_diameter_is_half_circumference():
    g = build_graph({"vertices": ["a", "b"], "edges": [
        {"id": "e1", "from": "a", "to": "b", "length": 1.0},
        {"id": "e2", "from": "b", "to": "a", "length": 3.0},
        {"id": "h", "from": "a", "length": "inf"}]})
    assert compact_core(g).diameter == pytest.approx(2.0)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_diameter_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    c = compact_core(g)
    total, brute = brute_force_core(g, n_sub=240)
    longest = max(e.length for e in g.finite_edges)
    assert c.total_length == pytest.approx(total, rel=1e-12)
    assert brute - 1e-9 <= c.diameter <= brute + longest / 240 + 1e-9
    assert c.diameter <= c.total_length + 1e-12


def test_halfline_mesh():
    m = build_mesh(halfline_graph(), 0.5, 2.0)
    gr = m.grid("h")
    np.testing.assert_allclose(gr.coords, [0, 0.5, 1, 1.5, 2])
    assert m.dirichlet[gr.dofs[-1]] and m.dirichlet.sum() == 1


def test_two_bridge_mesh_shares_vertex_dofs():
    m = build_mesh(two_bridge_graph(), 0.25, 1.0)
    core, ha, hb = m.grid("core"), m.grid("ha"), m.grid("hb")
    assert core.dofs[0] == ha.dofs[0] == m.vertex_dof["a"]
    assert core.dofs[-1] == hb.dofs[0] == m.vertex_dof["b"]
    assert len(core.coords) == 5


@pytest.mark.parametrize("h,L", [(0, 1), (-1, 1), (0.1, 0), (0.6, 1.0), (math.inf, 1)])
def test_invalid_resolution(h, L):
    with pytest.raises(InvalidResolution):
        build_mesh(line_graph(), h, L)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_mesh_invariants(seed):
    rng = np.random.default_rng(seed)
    m = random_mesh(rng)
    g = m.graph
    expected = sum(e.length for e in g.finite_edges) + g.n_halflines * m.L
    assert m.weights.sum() == pytest.approx(expected, rel=1e-12)
    for gr in m.grids:
        assert len(gr.coords) >= 2 and gr.spacing <= m.h * (1 + 1e-12)
        if not gr.edge.is_infinite:
            assert gr.dofs[0] == m.vertex_dof[gr.edge.tail] and gr.dofs[-1] == m.vertex_dof[gr.edge.head]
    assert m.core_weights.sum() == pytest.approx(sum(e.length for e in g.finite_edges), rel=1e-12)


def test_potential_examples():
    g, pspec = nfork_build(4, 1.0, 1, 0.1)
    m = build_mesh(g, 0.01, 1.0)
    w = sample_potential(m, pspec)
    assert w.sup_norm == pytest.approx(0.1**3 / 4, rel=1e-12)
    z = sample_potential(m, [{"edge": f"e{i}", "kind": "constant", "params": {"value": 0}} for i in range(4)])
    assert z.sup_norm == 0
    with pytest.raises(NegativePotentialValue):
        sample_potential(m, [{"edge": "e0", "kind": "bump", "params": {"width": 0.2, "height": -1}}])
    with pytest.raises(PotentialOnInfiniteEdge):
        sample_potential(m, [{"edge": "h", "kind": "constant", "params": {"value": 1}}])


def test_bump_integral():
    m = build_mesh(two_bridge_graph(), 1e-3, 1.0)
    w = sample_potential(m, [{"edge": "core", "kind": "bump",
                              "params": {"center": 0.5, "width": 0.5, "height": 1.0, "ramp": 0.25}}])
    # plateau 0.5 plus two cos^2 shoulders of length 0.25 and mean 1/2
    assert w.integral == pytest.approx(0.75, rel=1e-6)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_potential_supported_on_core(seed):
    rng = np.random.default_rng(seed)
    m = random_mesh(rng)
    pspec = [{"edge": e.id, "kind": "samples", "params": {"values": list(rng.uniform(0, 2, 7))}}
             for e in m.graph.finite_edges]
    w = sample_potential(m, pspec)
    assert np.all(w.values >= 0)
    assert np.all(w.values[m.core_weights == 0] == 0)
    assert w.sup_norm == w.values.max()


def test_negative_field_rejected():
    m = build_mesh(two_bridge_graph(), 0.1, 1.0)
    with pytest.raises(NegativePotentialValue):
        PotentialField(m, -np.ones(m.n_dofs))


def test_curvature_potential():
    m = build_mesh(two_bridge_graph(), 0.1, 1.0)
    assert curvature_potential(m, {"core": 0.0}).sup_norm == 0
    w = curvature_potential(m, {"core": 2.0})
    np.testing.assert_allclose(w.values[m.grid("core").dofs[1:-1]], 1.0)
    w_neg = curvature_potential(m, {"core": lambda x: -2.0 * np.ones_like(x)})
    np.testing.assert_allclose(w.values, w_neg.values)
    with pytest.raises(CurvatureOnInfiniteEdge):
        curvature_potential(m, {"ha": 1.0})


def test_curvature_rescaling():
    # gamma_t(x) = t^b gamma_0(t^b x)  gives  w_t = t^(2b) w_0(t^b x)
    t, b = 2.0, 1.0
    g = two_bridge_graph(1.0)
    m0 = build_mesh(g, 0.01, 1.0)
    mt = m0.scaled(t**-b)
    gamma0 = lambda x: 1.0 + np.sin(3 * x)  # noqa: E731
    w0 = curvature_potential(m0, {"core": gamma0})
    wt = curvature_potential(mt, {"core": lambda x: t**b * gamma0(t**b * x)})
    np.testing.assert_allclose(wt.values, t ** (2 * b) * w0.values, rtol=1e-12)
