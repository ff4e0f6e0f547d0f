"""JSON graph and warp files.

Graph document::

    {"symmetric": true,
     "vertices": [{"id": "x", "measure": 1.0}, ...],
     "edges": [{"from": "x", "to": "y", "weight": 1.0}, ...]}

Warp document: ``G1`` and ``G2`` are graph documents or paths (relative to the
warp file); ``alpha`` maps G2 ids to values and ``beta`` maps G1 ids to
values. In a twisted file both tables are nested, ``{x: {p: value}}``.

Errors name the file and the offending location, e.g. ``edges[3].weight``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .graph import GraphError, WeightedGraph, build_graph
from .warped import TwistedProductSpec, WarpedProductSpec


class InputError(GraphError):
    """Malformed or invalid input document."""


def _fail(where: str, loc: str, msg: str):
    raise InputError(f"{where}: {loc}: {msg}" if loc else f"{where}: {msg}")


def _number(where, loc, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(where, loc, f"expected a number, got {value!r}")
    return float(value)


def graph_from_dict(doc, where: str = "<graph>") -> WeightedGraph:
    if not isinstance(doc, dict):
        _fail(where, "", "graph document must be an object")
    for key in ("vertices", "edges"):
        if not isinstance(doc.get(key), list):
            _fail(where, key, "missing or not a list")
    symmetric = doc.get("symmetric", True)
    if not isinstance(symmetric, bool):
        _fail(where, "symmetric", "must be true or false")

    vertices = []
    for k, v in enumerate(doc["vertices"]):
        loc = f"vertices[{k}]"
        if not isinstance(v, dict) or "id" not in v or "measure" not in v:
            _fail(where, loc, "needs 'id' and 'measure'")
        mu = _number(where, f"{loc}.measure", v["measure"])
        if not mu > 0 or not math.isfinite(mu):
            _fail(where, f"{loc}.measure", f"non-positive measure {mu}")
        vertices.append((str(v["id"]), mu))
    ids = [v for v, _ in vertices]
    seen = set()
    for k, v in enumerate(ids):
        if v in seen:
            _fail(where, f"vertices[{k}].id", f"duplicate vertex id {v!r}")
        seen.add(v)

    edges = []
    for k, e in enumerate(doc["edges"]):
        loc = f"edges[{k}]"
        if not isinstance(e, dict) or not {"from", "to", "weight"} <= e.keys():
            _fail(where, loc, "needs 'from', 'to' and 'weight'")
        a, b = str(e["from"]), str(e["to"])
        w = _number(where, f"{loc}.weight", e["weight"])
        if a not in seen or b not in seen:
            _fail(where, loc, f"unknown vertex in edge ({a!r}, {b!r})")
        if a == b:
            _fail(where, loc, f"self-loop at vertex {a!r}")
        if not w >= 0 or not math.isfinite(w):
            _fail(where, f"{loc}.weight", f"invalid weight {w}")
        edges.append((a, b, w))
    try:
        return build_graph(vertices, edges, symmetric=symmetric)
    except GraphError as exc:
        _fail(where, "", str(exc))


def graph_to_dict(G: WeightedGraph) -> dict:
    symmetric = G.is_symmetric
    edges = []
    for i, j in zip(*np.nonzero(G.weights)):
        if symmetric and j < i:
            continue
        edges.append({"from": G.vertices[i], "to": G.vertices[j], "weight": float(G.weights[i, j])})
    return {
        "symmetric": symmetric,
        "vertices": [{"id": v, "measure": float(m)} for v, m in zip(G.vertices, G.measure)],
        "edges": edges,
    }


def _read_json(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}: malformed JSON: {exc.msg}") from None


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def load_graph(path) -> WeightedGraph:
    path = Path(path)
    return graph_from_dict(_read_json(path), str(path))


def save_graph(G: WeightedGraph, path) -> None:
    Path(path).write_text(dumps(graph_to_dict(G)))


def _graph_ref(doc, key, base: Path, where: str) -> WeightedGraph:
    ref = doc.get(key)
    if isinstance(ref, str):
        return load_graph(base / ref)
    if isinstance(ref, dict):
        return graph_from_dict(ref, f"{where}:{key}")
    _fail(where, key, "must be a graph document or a path")


def _table(where, loc, G: WeightedGraph, table) -> np.ndarray:
    if not isinstance(table, dict):
        _fail(where, loc, "must be an object keyed by vertex id")
    out = np.empty(G.n)
    for v in G.vertices:
        if v not in table:
            _fail(where, loc, f"no value for vertex {v!r}")
        val = _number(where, f"{loc}.{v}", table[v])
        if not val > 0 or not math.isfinite(val):
            _fail(where, f"{loc}.{v}", f"warping value must be positive, got {val}")
        out[G.idx(v)] = val
    extra = set(table) - set(G.vertices)
    if extra:
        _fail(where, loc, f"unknown vertex {sorted(extra)[0]!r}")
    return out


def warp_from_dict(doc, base: Path = Path("."), where: str = "<warp>"):
    if not isinstance(doc, dict):
        _fail(where, "", "warp document must be an object")
    G1 = _graph_ref(doc, "G1", base, where)
    G2 = _graph_ref(doc, "G2", base, where)
    alpha, beta = doc.get("alpha"), doc.get("beta")
    if doc.get("twisted", False):
        A = np.stack([_table(where, f"alpha.{x}", G2, (alpha or {}).get(x)) for x in G1.vertices])
        B = np.stack([_table(where, f"beta.{x}", G2, (beta or {}).get(x)) for x in G1.vertices])
        return TwistedProductSpec(G1, G2, A, B)
    return WarpedProductSpec(G1, G2, _table(where, "alpha", G2, alpha), _table(where, "beta", G1, beta))


def warp_to_dict(spec) -> dict:
    G1, G2 = spec.G1, spec.G2
    doc = {"G1": graph_to_dict(G1), "G2": graph_to_dict(G2)}
    if isinstance(spec, TwistedProductSpec):
        doc["twisted"] = True
        doc["alpha"] = {x: {p: float(spec.alpha[i, j]) for j, p in enumerate(G2.vertices)} for i, x in enumerate(G1.vertices)}
        doc["beta"] = {x: {p: float(spec.beta[i, j]) for j, p in enumerate(G2.vertices)} for i, x in enumerate(G1.vertices)}
    else:
        doc["alpha"] = {p: float(a) for p, a in zip(G2.vertices, spec.alpha)}
        doc["beta"] = {x: float(b) for x, b in zip(G1.vertices, spec.beta)}
    return doc


def load_warp(path):
    path = Path(path)
    return warp_from_dict(_read_json(path), path.parent, str(path))


def save_warp(spec, path) -> None:
    Path(path).write_text(dumps(warp_to_dict(spec)))


def jsonable(value):
    """Convert results to JSON-ready values; infinities become the string "inf"."""
    if isinstance(value, float) or isinstance(value, np.floating):
        v = float(value)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value
