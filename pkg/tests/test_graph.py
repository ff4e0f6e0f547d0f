import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, ref_gamma, ref_gamma2, ref_laplacian, settings_kw
from curvegraph.corpus import c4, cycle_graph, k2, p3
from curvegraph.graph import (
    GraphError,
    build_graph,
    degree,
    degrees,
    format_dim,
    from_arrays,
    gamma,
    gamma2,
    gamma2_all,
    gamma_all,
    indicator,
    is_connected,
    laplacian,
    laplacian_all,
    parse_dim,
    scale_weights,
    spheres,
)


def test_build_rejects_bad_input():
    with pytest.raises(GraphError, match="duplicate"):
        build_graph([("x", 1.0), ("x", 1.0)], [])
    with pytest.raises(GraphError, match="self-loop"):
        build_graph([("x", 1.0)], [("x", "x", 1.0)])
    with pytest.raises(GraphError, match="measure"):
        build_graph([("x", 0.0), ("y", 1.0)], [("x", "y", 1.0)])
    with pytest.raises(GraphError):
        from_arrays(["x", "y"], [1.0, 1.0], [[0.0, 1.0], [0.0, 0.0]])


def test_asymmetric_edges():
    G = build_graph([("x", 1.0), ("y", 2.0)], [("x", "y", 1.0), ("y", "x", 3.0)], symmetric=False)
    assert not G.is_symmetric
    assert G.weight("y", "x") == 3.0
    assert degree(G, "y") == pytest.approx(1.5)


def test_weights_are_read_only():
    G = k2()
    with pytest.raises(ValueError):
        G.weights[0, 1] = 5.0


def test_dims():
    assert parse_dim("inf") == math.inf
    assert parse_dim("2") == 2.0
    assert format_dim(math.inf) == "inf"
    with pytest.raises((GraphError, ValueError)):
        parse_dim("0")


def test_k2_operators_by_hand():
    G = k2()
    f = np.array([0.0, 3.0])
    assert laplacian(G, f, "x") == 3.0
    assert gamma(G, f, f, "x") == 4.5
    # Gamma_2(f) on K2 with unit data equals 2 Gamma(f)
    assert gamma2(G, f, f, "x") == pytest.approx(9.0)


def test_c4_indicator_expansion():
    # f = delta_a: Delta f(a) = -2, Gamma f(a) = 1, Gamma_2 f(a) = 1/2 (-1 + 6) = 5/2
    G = c4()
    f = indicator(G, "a")
    assert laplacian(G, f, "a") == -2
    assert gamma(G, f, f, "a") == 1
    assert gamma2(G, f, f, "a") == pytest.approx(2.5)
    # at the antipode only Delta Gamma survives: 1/2 (1/2 + 1/2)
    assert gamma2(G, f, f, "c") == pytest.approx(0.5)


def test_p3_center_indicator():
    G = p3()
    f = indicator(G, "y")
    assert gamma(G, f, f, "y") == 1
    assert gamma2(G, f, f, "y") == pytest.approx(2.5)


def test_spheres_and_degrees():
    G = cycle_graph(6)
    s1, s2 = spheres(G, "v0")
    assert sorted(G.vertices[i] for i in s1) == ["v1", "v5"]
    assert sorted(G.vertices[i] for i in s2) == ["v2", "v4"]
    np.testing.assert_allclose(degrees(G), 2.0)


def test_connectivity():
    G = build_graph([("a", 1.0), ("b", 1.0), ("c", 1.0)], [("a", "b", 1.0)])
    assert not is_connected(G)
    assert is_connected(p3())


@settings(**settings_kw)
@given(graphs(), st.integers(0, 2**31 - 1))
def test_operators_match_reference(G, seed):
    f, g = np.random.default_rng(seed).normal(size=(2, G.n))
    np.testing.assert_allclose(laplacian_all(G, f), ref_laplacian(G, f), atol=1e-12)
    np.testing.assert_allclose(gamma_all(G, f, g), ref_gamma(G, f, g), atol=1e-12)
    np.testing.assert_allclose(gamma2_all(G, f, g), ref_gamma2(G, f, g), atol=1e-10)


@settings(**settings_kw)
@given(graphs(), st.integers(0, 2**31 - 1), st.floats(-5, 5))
def test_translation_and_symmetry(G, seed, c):
    f, g = np.random.default_rng(seed).normal(size=(2, G.n))
    np.testing.assert_allclose(gamma2_all(G, f + c, g), gamma2_all(G, f, g), atol=1e-9)
    np.testing.assert_allclose(gamma_all(G, f, g), gamma_all(G, g, f), atol=1e-12)
    np.testing.assert_allclose(gamma2_all(G, f, g), gamma2_all(G, g, f), atol=1e-10)
    assert np.all(gamma_all(G, f, f) >= 0)


@settings(**settings_kw)
@given(graphs(), st.integers(0, 2**31 - 1))
def test_gamma_is_product_rule_defect(G, seed):
    f, g = np.random.default_rng(seed).normal(size=(2, G.n))
    defect = 0.5 * (laplacian_all(G, f * g) - f * laplacian_all(G, g) - g * laplacian_all(G, f))
    np.testing.assert_allclose(gamma_all(G, f, g), defect, atol=1e-10)


@settings(**settings_kw)
@given(graphs(symmetric=True), st.integers(0, 2**31 - 1))
def test_divergence_free(G, seed):
    f = np.random.default_rng(seed).normal(size=G.n)
    assert abs(np.sum(G.measure * laplacian_all(G, f))) <= 1e-9


def test_batched_columns():
    G = c4()
    F = np.random.default_rng(1).normal(size=(4, 7))
    batch = gamma2_all(G, F, F)
    for k in range(7):
        np.testing.assert_allclose(batch[:, k], gamma2_all(G, F[:, k], F[:, k]), atol=1e-12)


def test_scaling_weights():
    G = p3()
    H = scale_weights(G, 3.0)
    f = np.array([1.0, -2.0, 0.5])
    np.testing.assert_allclose(gamma2_all(H, f, f), 9 * gamma2_all(G, f, f))
