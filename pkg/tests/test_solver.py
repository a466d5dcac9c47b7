import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphnls import (
    FlowParams,
    build_mesh,
    discrete_energy_gradient,
    energy,
    line_graph,
    multistart_minimize,
    normalized_gradient_flow,
    sample_potential,
    soliton,
    soliton_params,
    star_graph,
    two_bridge_graph,
)
from graphnls.errors import MeshMismatch
from graphnls.graph import PotentialField
from graphnls.solver import delocalization_metric

from strategies import random_function, random_mesh, random_potential

BUMP = [{"edge": "core", "kind": "bump", "params": {"center": 0.5, "width": 0.5, "height": 1.0, "ramp": 0.25}}]


def directional_check(u, w, p, direction):
    g = discrete_energy_gradient(u, w, p).values
    analytic = float(np.dot(u.mesh.weights, g * direction))
    eps = 1e-6 * np.linalg.norm(u.values)
    fp = energy(u.with_values(u.values + eps * direction), w, p).E
    fm = energy(u.with_values(u.values - eps * direction), w, p).E
    return analytic, (fp - fm) / (2 * eps)


def test_zero_gradient():
    m = build_mesh(two_bridge_graph(), 0.05, 2.0)
    assert np.all(discrete_energy_gradient(m.function(0.0), None, 4.0).values == 0)


def test_soliton_gradient_is_multiple_of_u():
    m = build_mesh(line_graph(), 1e-3, 40.0)
    u = soliton(soliton_params(4.0), 1.0, m)
    g = discrete_energy_gradient(u, None, 4.0).values
    core = m.distance_from_vertex("o") < 20
    # stationary equation: -u'' - u^3 = -u/16
    np.testing.assert_allclose(g[core] / u.values[core], -1 / 16, rtol=1e-4)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_gradient_finite_differences(seed):
    rng = np.random.default_rng(seed)
    m = random_mesh(rng)
    u = random_function(m, rng)
    w = random_potential(m, rng)
    p = float(rng.uniform(2.5, 5.5))
    d = rng.normal(size=m.n_dofs)
    d[m.dirichlet] = 0
    analytic, fd = directional_check(u, w, p, d)
    assert fd == pytest.approx(analytic, rel=1e-6, abs=1e-12)


def test_gradient_mesh_mismatch():
    m1 = build_mesh(two_bridge_graph(), 0.1, 2.0)
    m2 = build_mesh(two_bridge_graph(), 0.1, 2.0)
    with pytest.raises(MeshMismatch):
        discrete_energy_gradient(m1.function(1.0), PotentialField.zero(m2), 4.0)


@pytest.fixture(scope="module")
def line_run():
    m = build_mesh(line_graph(), 2e-3, 40.0)
    d = m.distance_from_vertex("o")
    u0 = m.function(np.exp(-(d**2) / 8))
    return m, d, normalized_gradient_flow(u0, None, 4.0, 1.0)


def test_flow_recovers_soliton(line_run):
    m, d, rep = line_run
    assert rep.converged
    assert rep.energy.E == pytest.approx(-1 / 96, abs=1e-5)
    peak = float(np.argmax(rep.minimizer.values))
    assert peak == m.vertex_dof["o"]
    sup = np.max(np.abs(rep.minimizer.values - soliton_params(4.0).profile(d, 1.0)))
    assert sup < 1e-3
    assert rep.multiplier == pytest.approx(-1 / 16, rel=1e-4)


def test_flow_invariants(line_run):
    _, _, rep = line_run
    assert np.all(np.diff(rep.energy_history) <= 1e-15 * np.abs(rep.energy_history[1:]))
    assert rep.mass == pytest.approx(1.0, rel=1e-12)
    assert rep.residual < FlowParams().residual_tol
    assert rep.multiplier < 0 and np.all(rep.minimizer.values >= 0)


def test_explicit_scheme_agrees():
    # mu = 4 gives |lambda| = 1, so the explicit scheme reaches steady state quickly
    m = build_mesh(line_graph(), 0.05, 20.0)
    d = m.distance_from_vertex("o")
    u0 = m.function(np.exp(-(d**2)))
    imp = normalized_gradient_flow(u0, None, 4.0, 4.0)
    exp = normalized_gradient_flow(u0, None, 4.0, 4.0, FlowParams(scheme="explicit", max_iters=50000))
    assert imp.converged and exp.converged
    assert exp.energy.E == pytest.approx(imp.energy.E, rel=1e-6)
    assert np.all(np.diff(exp.energy_history) <= 1e-15 * np.abs(exp.energy_history[1:]))


def test_zero_initial_datum_rejected():
    m = build_mesh(line_graph(), 0.1, 5.0)
    with pytest.raises(ValueError):
        normalized_gradient_flow(m.function(0.0), None, 4.0, 1.0)


def test_flow_params_validation():
    with pytest.raises(ValueError):
        FlowParams(step=0.0)
    with pytest.raises(ValueError):
        FlowParams(energy_tol=0.0)
    with pytest.raises(ValueError):
        FlowParams(scheme="rk4")


def test_nonconvergence_is_data():
    m = build_mesh(line_graph(), 0.05, 40.0)
    d = m.distance_from_vertex("o")
    rep = normalized_gradient_flow(m.function(np.exp(-(d**2) / 8)), None, 4.0, 1.0, FlowParams(max_iters=2))
    assert not rep.converged and rep.iterations == 2


def test_star_graph_zero_potential_escapes():
    mu = 2.0
    m = build_mesh(star_graph(3), 0.02, 30.0)
    rep = multistart_minimize(m, None, 4.0, mu)
    assert rep.start == "escape"
    assert abs(rep.gap) <= 1e-4 * abs(rep.threshold)


def test_strong_bump_large_mass_binds_on_core():
    mu = 40.0
    m = build_mesh(two_bridge_graph(), 1e-3, 3.0)
    w = sample_potential(m, BUMP).scaled_by(4.0)
    rep = multistart_minimize(m, w, 4.0, mu)
    assert rep.converged and rep.gap < 0
    assert rep.start in ("potential-max", "plateau")
    assert rep.delocalization < 1e-6
    from graphnls import candidate_large_mass

    cand = candidate_large_mass(w, 4.0, mu)
    assert rep.energy.E <= energy(cand, w, 4.0).E


def test_multistart_deterministic():
    m = build_mesh(two_bridge_graph(), 0.02, 10.0)
    w = sample_potential(m, BUMP)
    a = multistart_minimize(m, w, 4.0, 1.5, FlowParams(seed=7))
    b = multistart_minimize(m, w, 4.0, 1.5, FlowParams(seed=7))
    assert a.energy.E == b.energy.E and a.starts == b.starts
    np.testing.assert_array_equal(a.minimizer.values, b.minimizer.values)


def test_delocalization_examples():
    m = build_mesh(two_bridge_graph(), 0.01, 60.0)
    sol = soliton_params(4.0)
    on_core = m.function(np.where(m.core_weights > 0, 1.0, 0.0) * (m.halfline_coord == 0))
    assert delocalization_metric(on_core, 1.0) == 0.0
    far = soliton(sol, 4.0, m, center=("ha", 45.0))
    assert delocalization_metric(far, 10.0) == pytest.approx(1.0, abs=1e-9)
    near = soliton(sol, 4.0, m, center=("core", 0.5))
    assert delocalization_metric(near, 20.0) < 1e-12
    assert 0.0 <= delocalization_metric(near, 0.0) <= 1.0
