from pathlib import Path

import pytest

from graphnls import build_mesh
from graphnls.errors import GraphNLSError
from graphnls.specfile import SpecError, load_spec, parse_spec

SPECS = Path(__file__).resolve().parents[1] / "specs"

GOOD = """\
vertices: [a, b]
edges:
  - {id: core, from: a, to: b, length: 2}
  - {id: ha, from: a, length: inf}
potential:
  - edge: core
    kind: constant
    params: {value: 0.5}
"""


def test_shipped_specs_load():
    files = sorted(SPECS.glob("*.yaml"))
    assert len(files) >= 4
    for f in files:
        problem = load_spec(f)
        assert problem.graph.edges


def test_parse_good():
    problem = parse_spec(GOOD)
    g = problem.graph
    assert {e.id for e in g.edges} == {"core", "ha"}
    assert g.edge("ha").is_infinite and g.edge("core").length == 2.0
    mesh = build_mesh(g, 0.1, 2.0)
    w = problem.potential_on(mesh)
    assert w.integral == pytest.approx(1.0)


def test_curvature_block():
    problem = load_spec(SPECS / "tadpole_curved.yaml")
    w = problem.potential_on(build_mesh(problem.graph, 0.1, 2.0))
    assert w.sup_norm == pytest.approx(1.5**2 / 4)
    assert w.integral == pytest.approx(3 * 1.5**2 / 4)


def test_no_potential_gives_none():
    problem = load_spec(SPECS / "two_bridge.yaml")
    assert problem.potential_on(build_mesh(problem.graph, 0.1, 2.0)) is None


@pytest.mark.parametrize("text, line, fragment", [
    ("vertices: [a]\nedges:\n  - {id: h, from: a, length: inf}\nfoo: 1\n", 4, "unknown key"),
    ("vertices: [a]\n", 1, "missing required key 'edges'"),
    ("vertices: [a]\nedges:\n  - {id: h, from: a}\n", 3, "missing 'length'"),
    ("vertices: [a]\nedges:\n  - {id: h, from: z, length: inf}\n", 3, "'h'"),
    ("vertices: [a]\nedges:\n  - {id: h, from: a, length: -1, to: a}\n", 3, "'h'"),
    ("vertices: [a, b]\nedges:\n  - {id: e, from: a, to: b, length: 1}\n"
     "  - {id: h, from: a, length: inf}\npotential:\n  - {edge: e, kind: wobble}\n", 6, "unknown potential kind"),
    ("vertices: [a, b]\nedges:\n  - {id: e, from: a, to: b, length: 1}\n"
     "  - {id: h, from: a, length: inf}\npotential:\n  - {edge: q, kind: constant}\n", 6, "unknown edge"),
    ("vertices: [a, b]\nedges:\n  - {id: e, from: a, to: b, length: 1}\n"
     "  - {id: h, from: a, length: inf}\ncurvature:\n  e: big\n", 6, "must be a number"),
    ("vertices: [a\nedges: []\n", 2, "not valid YAML"),
])
def test_errors_have_location(text, line, fragment):
    with pytest.raises(SpecError) as info:
        parse_spec(text, "x.yaml")
    err = info.value
    assert fragment in str(err)
    assert err.line == line and err.column is not None
    assert str(err).startswith(f"x.yaml:{line}:")


def test_negative_potential_is_located():
    text = ("vertices: [a, b]\nedges:\n  - {id: e, from: a, to: b, length: 1}\n"
            "  - {id: h, from: a, length: inf}\npotential:\n  - edge: e\n    kind: bump\n"
            "    params: {height: -1}\n")
    with pytest.raises(SpecError, match="invalid potential") as info:
        parse_spec(text)
    assert info.value.line == 6


def test_potential_on_halfline_rejected():
    text = "vertices: [a]\nedges:\n  - {id: h, from: a, length: inf}\npotential:\n  - {edge: h, kind: constant}\n"
    with pytest.raises(SpecError):
        parse_spec(text)


def test_empty_and_missing_file(tmp_path):
    with pytest.raises(SpecError, match="empty"):
        parse_spec("")
    with pytest.raises(SpecError, match="cannot read"):
        load_spec(tmp_path / "nope.yaml")


def test_spec_error_is_library_error():
    assert issubclass(SpecError, GraphNLSError) and issubclass(SpecError, ValueError)
