import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import floyd_warshall
from curvegraph import metrics as mt
from curvegraph import warped as wp
from curvegraph.corpus import complete_graph, k2, p3, random_graph, random_tree
from curvegraph.graph import GraphError, build_graph


def test_p3_resistance():
    G = p3()
    assert mt.resistance_metric(G, "x", "y").value == pytest.approx(1.0, abs=1e-10)
    assert mt.resistance_metric(G, "x", "z").value == pytest.approx(math.sqrt(2), abs=1e-10)
    assert mt.resistance_metric(G, "x", "x").value == 0.0


def test_parallel_edges_halve_effective_resistance():
    # two unit paths in parallel: energy doubles
    G = build_graph([(v, 1.0) for v in "abcd"], [("a", "b", 1), ("b", "d", 1), ("a", "c", 1), ("c", "d", 1)])
    assert mt.resistance_metric(G, "a", "d").value == pytest.approx(1.0)


def test_resistance_preconditions():
    G = build_graph([("x", 2.0), ("y", 1.0)], [("x", "y", 1.0)])
    with pytest.raises(GraphError, match="measure"):
        mt.resistance_metric(G, "x", "y")
    A = build_graph([("x", 1.0), ("y", 1.0)], [("x", "y", 1.0), ("y", "x", 2.0)], symmetric=False)
    with pytest.raises(GraphError):
        mt.resistance_metric(A, "x", "y")
    D = build_graph([("x", 1.0), ("y", 1.0), ("z", 1.0)], [("x", "y", 1.0)])
    with pytest.raises(mt.Unreachable):
        mt.resistance_metric(D, "x", "z")


def test_path_distance_modes():
    G = build_graph([(v, 1.0) for v in "abc"], [("a", "b", 4.0), ("b", "c", 4.0), ("a", "c", 9.0)])
    r = mt.weighted_path_distance(G, "a", "c")
    assert r.value == 8.0 and r.path == ["a", "b", "c"]
    r = mt.weighted_path_distance(G, "a", "c", "inverse_sqrt_weight")
    assert r.value == pytest.approx(1 / 3) and r.path == ["a", "c"]
    with pytest.raises(ValueError):
        mt.weighted_path_distance(G, "a", "c", "bogus")


def test_degree_path_k2():
    assert mt.degree_path_metric(k2(), "x", "y").value == pytest.approx(1.0)


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 10**6))
def test_dijkstra_matches_floyd_warshall(seed):
    G = random_graph(7, 0.4, seed=seed)
    for mode in ("weight", "inverse_sqrt_weight", "degree"):
        np.testing.assert_allclose(mt.distance_table(G, mode), floyd_warshall(mt.edge_lengths(G, mode)), atol=1e-12)


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 10**6))
def test_degree_path_metric_is_intrinsic(seed):
    G = random_graph(6, 0.5, seed=seed, measure_range=(1.0, 1.0))
    assert mt.intrinsic_metric_check(G, mt.metric_table(G, "degree-path"))


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 10**6))
def test_tree_series_law(seed):
    T = random_tree(7, seed=seed)
    path = mt.weighted_path_distance(T, T.vertices[0], T.vertices[-1]).path
    r2 = lambda u, v: mt.resistance_metric(T, u, v).value ** 2
    total = sum(r2(a, b) for a, b in zip(path, path[1:]))
    assert r2(path[0], path[-1]) == pytest.approx(total, abs=1e-9)
    # on a tree each edge contributes 1/weight
    assert total == pytest.approx(sum(1 / T.weight(a, b) for a, b in zip(path, path[1:])))


def test_resistance_fails_vertex_bound_on_triangle():
    # unit K3: effective resistance 2/3 per edge, so the vertex sum is 4/3 > 1
    G = complete_graph(3)
    R = mt.metric_table(G, "resistance")
    np.testing.assert_allclose(R[0, 1] ** 2, 2 / 3)
    assert not mt.intrinsic_metric_check(G, R)


def test_intrinsic_check_rejects():
    G = k2()
    assert not mt.intrinsic_metric_check(G, np.array([[0.0, 2.0], [2.0, 0.0]]))
    assert not mt.intrinsic_metric_check(G, np.array([[0.0, 0.5], [0.3, 0.0]]))


def test_dirichlet_residual():
    G = random_graph(8, 0.4, seed=9, measure_range=(1.0, 1.0))
    sol = mt.dirichlet_solve(G, G.vertices[0], G.vertices[-1])
    assert sol.residual <= 1e-10
    assert sol.potential[G.idx(G.vertices[0])] == 0 and sol.potential[G.idx(G.vertices[-1])] == 1


def test_totally_geodesic_unit_warps():
    spec = wp.WarpedProductSpec(p3(), k2("p", "q"), np.ones(2), np.ones(3))
    rep = mt.totally_geodesic_check(spec, ["x", "y", "z"], ["p", "q"], "p")
    assert rep.agreement["weight"]


def test_totally_geodesic_preconditions():
    spec = wp.WarpedProductSpec(p3(), k2("p", "q"), np.array([1.0, 2.0]), np.ones(3))
    with pytest.raises(GraphError, match="maximum"):
        mt.totally_geodesic_check(spec, ["x"], ["p", "q"], "p")


def test_product_resistance_experiment():
    spec = wp.WarpedProductSpec(k2("x", "y"), k2("p", "q"), np.ones(2), np.ones(2))
    ex = mt.product_resistance_experiment(spec, "x", "y", "p")
    # K2 x K2 is C4: two unit paths of length 1 and 3 in parallel, R = 3/4
    assert ex.measured == pytest.approx(math.sqrt(0.75))
    assert ex.claimed == pytest.approx(1 / math.sqrt(2))
