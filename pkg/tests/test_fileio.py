import json
import math

import numpy as np
import pytest

from curvegraph import warped as wp
from curvegraph.corpus import random_graph, random_warp_spec, warped_c4
from curvegraph.fileio import (
    InputError,
    graph_from_dict,
    graph_to_dict,
    jsonable,
    load_graph,
    load_warp,
    save_graph,
    save_warp,
)

K2 = {
    "symmetric": True,
    "vertices": [{"id": "x", "measure": 1}, {"id": "y", "measure": 1}],
    "edges": [{"from": "x", "to": "y", "weight": 1}],
}


def test_k2_document():
    G = graph_from_dict(K2)
    assert G.vertices == ("x", "y") and G.weight("y", "x") == 1.0


@pytest.mark.parametrize(
    "patch, message",
    [
        (lambda d: d["vertices"][0].update(measure=0), "vertices\\[0\\].measure: non-positive measure"),
        (lambda d: d["edges"][0].update(weight="a"), "edges\\[0\\].weight"),
        (lambda d: d["edges"][0].update(to="z"), "edges\\[0\\]: unknown vertex"),
        (lambda d: d["edges"][0].update(to="x"), "self-loop"),
        (lambda d: d["vertices"].append({"id": "x", "measure": 1}), "duplicate"),
        (lambda d: d.pop("edges"), "edges"),
    ],
)
def test_diagnostics(patch, message):
    doc = json.loads(json.dumps(K2))
    patch(doc)
    with pytest.raises(InputError, match=message):
        graph_from_dict(doc, "g.json")


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": [\n  1,,\n]}')
    with pytest.raises(InputError, match="line 2"):
        load_graph(p)


def test_graph_round_trip_bit_stable(tmp_path):
    G = random_graph(6, 0.5, seed=3, symmetric=False)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_graph(G, a)
    H = load_graph(a)
    save_graph(H, b)
    assert G == H
    assert a.read_bytes() == b.read_bytes()


def test_warped_c4_round_trip(tmp_path):
    p = tmp_path / "w.json"
    save_warp(warped_c4(), p)
    s = load_warp(p)
    assert wp.doubly_warped_product(s) == wp.doubly_warped_product(warped_c4())
    save_warp(s, tmp_path / "w2.json")
    assert p.read_bytes() == (tmp_path / "w2.json").read_bytes()


def test_warp_with_graph_paths(tmp_path):
    s = random_warp_spec(4)
    save_graph(s.G1, tmp_path / "g1.json")
    save_graph(s.G2, tmp_path / "g2.json")
    doc = {
        "G1": "g1.json",
        "G2": "g2.json",
        "alpha": {p: float(a) for p, a in zip(s.G2.vertices, s.alpha)},
        "beta": {x: float(b) for x, b in zip(s.G1.vertices, s.beta)},
    }
    (tmp_path / "w.json").write_text(json.dumps(doc))
    t = load_warp(tmp_path / "w.json")
    np.testing.assert_array_equal(t.alpha, s.alpha)


def test_warp_table_errors(tmp_path):
    doc = {"G1": K2, "G2": K2, "alpha": {"x": 1.0}, "beta": {"x": 1.0, "y": -1.0}}
    (tmp_path / "w.json").write_text(json.dumps(doc))
    with pytest.raises(InputError, match="alpha: no value for vertex 'y'"):
        load_warp(tmp_path / "w.json")
    doc["alpha"] = {"x": 1.0, "y": 2.0}
    (tmp_path / "w.json").write_text(json.dumps(doc))
    with pytest.raises(InputError, match="beta.y"):
        load_warp(tmp_path / "w.json")


def test_twisted_round_trip(tmp_path):
    s = random_warp_spec(8)
    A = np.random.default_rng(0).uniform(0.5, 2, size=(s.G1.n, s.G2.n))
    tw = wp.TwistedProductSpec(s.G1, s.G2, A, A.T.copy().T)
    save_warp(tw, tmp_path / "t.json")
    back = load_warp(tmp_path / "t.json")
    assert isinstance(back, wp.TwistedProductSpec)
    np.testing.assert_array_equal(back.alpha, tw.alpha)


def test_jsonable():
    assert jsonable({"a": math.inf, "b": np.float64(1.5), "c": [np.int64(2)], "d": np.bool_(True)}) == {
        "a": "inf",
        "b": 1.5,
        "c": [2],
        "d": True,
    }
    assert graph_to_dict(graph_from_dict(K2))["edges"] == [{"from": "x", "to": "y", "weight": 1.0}]
