"""JSON and CSV formats.

Spaces: ``{"labels": [...], "dist": [["0", "4/3", ...], ...]}`` with exact
rationals as strings and ``"inf"`` for infinite distances.
Graphs: ``{"n": k, "edges": [[i, j], ...]}``.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

from .construct import ConstructionResult
from .errors import ParseError, ValidationError
from .spaces import FiniteMetricSpace, Graph, as_distance, validate_metric


def _dist_str(d) -> str:
    return "inf" if math.isinf(d) else str(d)


def space_to_dict(x: FiniteMetricSpace) -> dict:
    return {"labels": list(x.labels),
            "dist": [[_dist_str(d) for d in row] for row in x.dist]}


def space_from_dict(obj) -> FiniteMetricSpace:
    if not isinstance(obj, dict) or "dist" not in obj:
        raise ParseError("space JSON needs a 'dist' matrix")
    rows = obj["dist"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("'dist' must be a list of lists")
    try:
        parsed = [[as_distance(v if isinstance(v, str) else str(v)) for v in row] for row in rows]
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    labels = obj.get("labels")
    return validate_metric(parsed, labels)


def dumps_space(x: FiniteMetricSpace) -> str:
    return json.dumps(space_to_dict(x), ensure_ascii=False)


def loads_space(text: str) -> FiniteMetricSpace:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return space_from_dict(obj)


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in sorted(g.edges)]}


def graph_from_dict(obj) -> Graph:
    try:
        n = obj["n"]
        edges = obj.get("edges", [])
        if not isinstance(n, int) or not all(len(e) == 2 for e in edges):
            raise ParseError("graph JSON needs integer 'n' and pair 'edges'")
        return Graph.from_edges(n, [tuple(int(v) for v in e) for e in edges])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad graph JSON: {exc}") from exc


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def load_space(path: str) -> FiniteMetricSpace:
    return loads_space(read_text(path))


def load_graph(path: str) -> Graph:
    try:
        return graph_from_dict(json.loads(read_text(path)))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def construction_to_dict(c: ConstructionResult) -> dict:
    return {
        "target": str(c.target),
        "n": c.n,
        "r": str(c.r),
        "s": str(c.s),
        "achieved": str(c.achieved),
        "gap": str(c.gap),
        "iterations": c.iterations,
        "space": space_to_dict(c.space),
    }


def format_float(v: float) -> str:
    return format(v, ".17g")


def profile_csv(rows) -> str:
    lines = ["t,magnitude"]
    for t, m in rows:
        lines.append(f"{format_float(t)},{'NA' if m is None else format_float(m)}")
    return "\n".join(lines) + "\n"


def parse_profile_csv(text: str) -> list:
    lines = text.strip().splitlines()
    if not lines or lines[0].strip() != "t,magnitude":
        raise ValidationError("missing 't,magnitude' header")
    out = []
    for line in lines[1:]:
        t, m = line.split(",")
        out.append((float(t), None if m == "NA" else float(m)))
    return out
