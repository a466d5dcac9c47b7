"""Reading graph and potential descriptions from YAML files.

A file looks like::

    vertices: [a, b]
    edges:
      - {id: core, from: a, to: b, length: 1}
      - {id: ha, from: a, length: inf}
      - {id: hb, from: b, length: inf}
    potential:            # optional, one primitive per entry
      - edge: core
        kind: bump        # constant | bump | monomial | samples
        params: {center: 0.5, width: 0.5, height: 1.0, ramp: 0.25}
    curvature:            # optional, w = gamma^2 / 4 on the listed edges
      core: 2.0

Errors carry the line and column of the offending entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .errors import GraphNLSError
from .graph import build_graph, build_mesh
from .scan import Problem

_POTENTIAL_KINDS = ("constant", "bump", "monomial", "samples")


class SpecError(GraphNLSError):
    def __init__(self, message: str, source: str = "<spec>", line: int | None = None,
                 column: int | None = None):
        self.source, self.line, self.column = source, line, column
        where = source if line is None else f"{source}:{line}:{column}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class _Located:
    value: Any
    line: int
    column: int


def _construct(node, loader):
    """Plain Python data alongside a mirror tree of (line, column) marks."""
    mark = (node.start_mark.line + 1, node.start_mark.column + 1)
    if isinstance(node, yaml.MappingNode):
        data, marks = {}, {}
        for k, v in node.value:
            key = loader.construct_object(k, deep=True)
            data[key], marks[key] = _construct(v, loader)
        return data, _Located(marks, *mark)
    if isinstance(node, yaml.SequenceNode):
        pairs = [_construct(v, loader) for v in node.value]
        return [d for d, _ in pairs], _Located([m for _, m in pairs], *mark)
    return loader.construct_object(node, deep=True), _Located(None, *mark)


def parse_spec(text: str, source: str = "<spec>") -> Problem:
    loader = yaml.SafeLoader(text)
    try:
        node = loader.get_single_node()
    except yaml.YAMLError as exc:
        m = getattr(exc, "problem_mark", None)
        raise SpecError(f"not valid YAML: {getattr(exc, 'problem', exc)}", source,
                        m.line + 1 if m else None, m.column + 1 if m else None) from None
    finally:
        loader.dispose()
    if node is None:
        raise SpecError("empty spec file", source)
    data, marks = _construct(node, yaml.SafeLoader(""))

    def fail(msg, loc: _Located):
        raise SpecError(msg, source, loc.line, loc.column)

    if not isinstance(data, dict):
        fail("top level must be a mapping", marks)
    unknown = set(data) - {"vertices", "edges", "potential", "curvature"}
    if unknown:
        key = sorted(map(str, unknown))[0]
        fail(f"unknown key {key!r}", marks.value[key])
    for key in ("vertices", "edges"):
        if key not in data:
            fail(f"missing required key {key!r}", marks)
        if not isinstance(data[key], list):
            fail(f"{key!r} must be a list", marks.value[key])

    edge_marks = {}
    for raw, loc in zip(data["edges"], marks.value["edges"].value):
        if not isinstance(raw, dict):
            fail("each edge must be a mapping", loc)
        for req in ("id", "from", "length"):
            if req not in raw:
                fail(f"edge is missing {req!r}", loc)
        edge_marks[str(raw["id"])] = loc
    try:
        graph = build_graph(data)
    except GraphNLSError as exc:
        loc = next((m for eid, m in edge_marks.items() if repr(eid) in str(exc)), marks)
        fail(str(exc), loc)

    potential = []
    if data.get("potential") is not None:
        if not isinstance(data["potential"], list):
            fail("'potential' must be a list", marks.value["potential"])
        for raw, loc in zip(data["potential"], marks.value["potential"].value):
            if not isinstance(raw, dict) or "edge" not in raw or "kind" not in raw:
                fail("potential entries need 'edge' and 'kind'", loc)
            if str(raw["kind"]).lower() not in _POTENTIAL_KINDS:
                fail(f"unknown potential kind {raw['kind']!r}", loc)
            if str(raw["edge"]) not in {e.id for e in graph.edges}:
                fail(f"potential on unknown edge {raw['edge']!r}", loc)
            params = raw.get("params") or {}
            if not isinstance(params, dict):
                fail("'params' must be a mapping", loc)
            potential.append({"edge": str(raw["edge"]), "kind": str(raw["kind"]), "params": params})
    curvature = []
    if data.get("curvature") is not None:
        if not isinstance(data["curvature"], dict):
            fail("'curvature' must map edge ids to numbers", marks.value["curvature"])
        for eid, gam in data["curvature"].items():
            if str(eid) not in {e.id for e in graph.edges}:
                fail(f"curvature on unknown edge {eid!r}", marks.value["curvature"].value[eid])
            if not isinstance(gam, (int, float)):
                fail(f"curvature of edge {eid!r} must be a number", marks.value["curvature"].value[eid])
            curvature.append((str(eid), float(gam)))

    problem = Problem(graph, tuple(potential), tuple(curvature))
    # sample once on a coarse mesh so bad potentials fail here, with a location
    try:
        finite = graph.finite_edges
        h = min([e.length for e in finite] + [1.0]) / 4
        problem.potential_on(build_mesh(graph, h, 10 * h))
    except (GraphNLSError, KeyError, TypeError, ValueError) as exc:
        loc = marks.value["potential"] if "potential" in data else marks
        fail(f"invalid potential: {exc}", loc)
    return problem


def load_spec(path: str | Path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"cannot read spec file: {exc.strerror}", str(path)) from None
    return parse_spec(text, str(path))
