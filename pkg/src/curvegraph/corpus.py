"""Standard small graphs and seeded random graphs and warp specs."""

from __future__ import annotations

import numpy as np

from .graph import GraphError, WeightedGraph, build_graph, from_arrays, is_connected
from .warped import WarpedProductSpec


def path_graph(n: int, weight: float = 1.0, prefix: str = "v") -> WeightedGraph:
    vs = [f"{prefix}{i}" for i in range(n)]
    return build_graph([(v, 1.0) for v in vs], [(vs[i], vs[i + 1], weight) for i in range(n - 1)])


def cycle_graph(n: int, weight: float = 1.0, prefix: str = "v") -> WeightedGraph:
    vs = [f"{prefix}{i}" for i in range(n)]
    return build_graph([(v, 1.0) for v in vs], [(vs[i], vs[(i + 1) % n], weight) for i in range(n)])


def complete_graph(n: int, weight: float = 1.0, prefix: str = "v") -> WeightedGraph:
    vs = [f"{prefix}{i}" for i in range(n)]
    return build_graph([(v, 1.0) for v in vs], [(vs[i], vs[j], weight) for i in range(n) for j in range(i + 1, n)])


def k2(a: str = "x", b: str = "y") -> WeightedGraph:
    return build_graph([(a, 1.0), (b, 1.0)], [(a, b, 1.0)])


def p3() -> WeightedGraph:
    return build_graph([(v, 1.0) for v in "xyz"], [("x", "y", 1.0), ("y", "z", 1.0)])


def c4() -> WeightedGraph:
    return build_graph([(v, 1.0) for v in "abcd"], [("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("d", "a", 1.0)])


def warped_c4() -> WarpedProductSpec:
    """K2{x,y} times K2{p,q} with alpha(p) = 1, alpha(q) = 2, beta = 1."""
    return WarpedProductSpec(k2("x", "y"), k2("p", "q"), np.array([1.0, 2.0]), np.array([1.0, 1.0]))


def random_graph(
    n: int,
    edge_prob: float,
    weight_range: tuple[float, float] = (0.5, 2.0),
    measure_range: tuple[float, float] = (0.5, 2.0),
    seed: int = 0,
    symmetric: bool = True,
    max_attempts: int = 200,
    prefix: str = "v",
) -> WeightedGraph:
    """Connected random graph, deterministic in all arguments.

    Edges appear independently with probability ``edge_prob``; weights and
    measures are uniform on their ranges. With ``symmetric`` unset each
    direction of an edge gets its own weight.
    """
    if n < 1:
        raise GraphError("need at least one vertex")
    if not 0 <= edge_prob <= 1:
        raise GraphError("edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    ids = [f"{prefix}{i}" for i in range(n)]
    iu = np.triu_indices(n, 1)
    for _ in range(max_attempts):
        mask = np.zeros((n, n), dtype=bool)
        mask[iu] = rng.random(len(iu[0])) < edge_prob
        mask = mask | mask.T
        W = rng.uniform(*weight_range, size=(n, n))
        if symmetric:
            W = np.triu(W, 1)
            W = W + W.T
        W = np.where(mask, W, 0.0)
        m = rng.uniform(*measure_range, size=n)
        G = from_arrays(ids, m, W)
        if is_connected(G):
            return G
    raise GraphError(f"no connected graph after {max_attempts} attempts (n={n}, p={edge_prob})")


def random_tree(n: int, seed: int = 0, weight_range=(0.5, 2.0), prefix: str = "v") -> WeightedGraph:
    """Random recursive tree with unit measure."""
    rng = np.random.default_rng(seed)
    ids = [f"{prefix}{i}" for i in range(n)]
    edges = [(ids[i], ids[int(rng.integers(0, i))], float(rng.uniform(*weight_range))) for i in range(1, n)]
    return build_graph([(v, 1.0) for v in ids], edges)


def random_warp_spec(
    seed: int,
    max_n: int = 6,
    warp_range: tuple[float, float] = (0.5, 2.0),
    unit_measure: bool = False,
) -> WarpedProductSpec:
    """Two connected random factors with 2..max_n vertices and uniform warps."""
    rng = np.random.default_rng(seed)
    n1, n2 = (int(v) for v in rng.integers(2, max_n + 1, size=2))
    mr = (1.0, 1.0) if unit_measure else (0.5, 2.0)
    G1 = random_graph(n1, 0.6, measure_range=mr, seed=int(rng.integers(2**31)), prefix="x")
    G2 = random_graph(n2, 0.6, measure_range=mr, seed=int(rng.integers(2**31)), prefix="p")
    alpha = rng.uniform(*warp_range, size=n2)
    beta = rng.uniform(*warp_range, size=n1)
    return WarpedProductSpec(G1, G2, alpha, beta)
