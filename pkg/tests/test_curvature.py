import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, ref_curvature
from curvegraph import curvature as cv
from curvegraph.corpus import c4, complete_graph, k2, p3, random_graph
from curvegraph.graph import GraphError, build_graph, indicator, laplacian_all, scale_weights

INF = math.inf


@pytest.mark.parametrize("N", [1, 2, 4, 10, INF])
def test_k2(N):
    G = k2()
    expected = 2 - 2 / N
    for x in G.vertices:
        assert cv.curvature_value(G, x, N) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("N", [1, 2, 4, INF])
def test_p3(N):
    G = p3()
    assert cv.curvature_value(G, "x", N) == pytest.approx(1.5 - 2 / N, abs=1e-9)
    assert cv.curvature_value(G, "y", N) == pytest.approx(min(0.5, 2.5 - 4 / N), abs=1e-9)


@pytest.mark.parametrize("N", [1, 2, 4, INF])
def test_c4(N):
    assert cv.curvature_value(c4(), "a", N) == pytest.approx(2 - 4 / N, abs=1e-9)


def test_reference_oracle_frozen_graphs():
    # weighted, non-unit measure, and one-way weight asymmetry
    for seed, sym in [(3, True), (8, False), (21, True)]:
        G = random_graph(6, 0.5, seed=seed, symmetric=sym)
        for x in G.vertices[:3]:
            for N in (0.5, 2.0, INF):
                assert cv.curvature_value(G, x, N) == pytest.approx(ref_curvature(G, x, N), abs=1e-9)


def test_maximizer_attains():
    G = random_graph(7, 0.5, seed=4)
    for x in G.vertices:
        res = cv.curvature_function(G, x, 3.0)
        assert res.maximizer_basis
        for f in res.maximizer_basis:
            assert cv.test_function_bound(G, x, 3.0, f) == pytest.approx(res.value, abs=1e-8)


def test_test_function_bound():
    G = k2()
    assert cv.test_function_bound(G, "x", INF, indicator(G, "x")) == pytest.approx(2.0)
    with pytest.raises(GraphError):
        cv.test_function_bound(G, "x", INF, np.ones(2))


def test_isolated_vertex():
    G = build_graph([("a", 1.0), ("b", 1.0), ("c", 1.0)], [("a", "b", 1.0)])
    with pytest.raises(GraphError):
        cv.curvature_value(G, "c", 2.0)


def test_saturation_examples():
    for N in (1, 2, INF):
        assert cv.classify_saturation(k2(), "x", N) == cv.UNSATURATED
    assert cv.classify_saturation(c4(), "a", INF) == cv.WEAK
    assert cv.classify_saturation(p3(), "y", INF) == cv.STRONG


def test_cd_check_brackets():
    G = p3()
    K = cv.curvature_value(G, "y", 3.0)
    assert cv.cd_check(G, "y", K - 1e-6, 3.0)
    assert not cv.cd_check(G, "y", K + 1e-6, 3.0)


def test_structural_k2():
    G = k2()
    assert cv.structural_lower_bound(G, "x", 2) == pytest.approx(-1.0)
    assert cv.structural_lower_bound(G, "x", 1) == pytest.approx(0.0)
    assert cv.curvature_value(G, "x", 1) == pytest.approx(0.0, abs=1e-12)
    assert cv.structural_upper_bound(G, "x", "as_stated") == pytest.approx(1.0)
    assert cv.structural_upper_bound(G, "x", "corrected") == pytest.approx(2.0)
    assert cv.delta_quotient(G, "x") == pytest.approx(2.0)


def test_structural_upper_regular_unit():
    G = complete_graph(4)  # d = 3
    d = 3.0
    expect = d / 4 + (d**0.5 - 1) * d**0.5 / 2 + 3 * d / 4
    assert cv.structural_upper_bound(G, "v0", "as_stated") == pytest.approx(expect)


def test_einstein():
    assert cv.einstein_check(k2(), 3.0).is_einstein
    r = cv.einstein_check(c4(), 8.0)
    assert r.is_einstein and r.value == pytest.approx(1.5)
    r = cv.einstein_check(p3(), INF)
    assert not r.is_einstein and r.spread == pytest.approx(1.0)


@settings(deadline=None, max_examples=25)
@given(graphs(), st.sampled_from([0.5, 3.0]))
def test_scaling(G, lam):
    H = scale_weights(G, lam)
    for x in G.vertices:
        for N in (1.0, INF):
            assert cv.curvature_value(H, x, N) == pytest.approx(lam * cv.curvature_value(G, x, N), abs=1e-9)


@settings(deadline=None, max_examples=25)
@given(graphs())
def test_monotone_in_dimension(G):
    for x in G.vertices:
        vals = [cv.curvature_value(G, x, N) for N in (0.5, 1, 2, 5, INF)]
        assert all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))


@settings(deadline=None, max_examples=25)
@given(graphs())
def test_delta_quotient_and_small_dim_lower(G):
    for x in G.vertices:
        assert cv.curvature_value(G, x, INF) <= cv.delta_quotient(G, x) + 1e-9
        assert cv.structural_lower_bound(G, x, 1.0) <= cv.curvature_value(G, x, 1.0) + 1e-9


@settings(deadline=None, max_examples=25)
@given(graphs(), st.sampled_from([1.0, 2.0, INF]))
def test_saturation_sound(G, N):
    for x in G.vertices:
        res = cv.curvature_function(G, x, N)
        i = G.idx(x)
        laps = [abs(laplacian_all(G, f)[i]) for f in res.maximizer_basis]
        if res.saturation == cv.STRONG:
            assert max(laps) <= 1e-9
        elif res.saturation == cv.UNSATURATED:
            assert res.margins["min_abs_laplacian"] > 1e-6
