"""Weighted graphs and the discrete operators Laplacian, Gamma and Gamma_2.

Graphs are finite, carry a positive vertex measure ``m`` and non-negative,
possibly asymmetric, directed edge weights ``w``. Vertex functions are plain
numpy arrays aligned with ``graph.vertices`` (mappings keyed by vertex id are
accepted wherever a function is expected).

All ``*_all`` operators accept a single function of shape ``(n,)`` or a batch
of functions stacked as columns, shape ``(n, k)``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

INF = math.inf


class GraphError(ValueError):
    """Invalid graph data or an operation undefined on the given graph."""


def check_dim(N: float) -> float:
    """Validate a dimension parameter N in (0, inf]."""
    N = float(N)
    if not N > 0:
        raise GraphError(f"dimension must be positive, got {N}")
    return N


def inv_dim(N: float) -> float:
    """1/N with 1/inf = 0."""
    N = check_dim(N)
    return 0.0 if math.isinf(N) else 1.0 / N


def parse_dim(text: str | float) -> float:
    if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    return check_dim(float(text))


def format_dim(N: float) -> str | float:
    return "inf" if math.isinf(N) else N


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable weighted graph with dense array storage.

    ``weights[i, j]`` is w(v_i, v_j); zero means no edge.
    """

    vertices: tuple[str, ...]
    measure: np.ndarray
    weights: np.ndarray
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {v: i for i, v in enumerate(self.vertices)})
        self.measure.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.index

    def idx(self, v: str) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def neighbors(self, v: str) -> list[str]:
        i = self.idx(v)
        return [self.vertices[j] for j in np.flatnonzero(self.weights[i])]

    def edges(self) -> list[tuple[str, str, float]]:
        """Directed edges (from, to, weight) in canonical index order."""
        rows, cols = np.nonzero(self.weights)
        return [(self.vertices[i], self.vertices[j], float(self.weights[i, j])) for i, j in zip(rows, cols)]

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.weights, self.weights.T))

    def weight(self, u: str, v: str) -> float:
        return float(self.weights[self.idx(u), self.idx(v)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and np.array_equal(self.measure, other.measure)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


def from_arrays(vertices: Sequence[str], measure, weights) -> WeightedGraph:
    """Build and validate a graph from a vertex list and dense arrays."""
    vertices = tuple(str(v) for v in vertices)
    m = np.array(measure, dtype=float).reshape(-1)
    W = np.array(weights, dtype=float)
    n = len(vertices)
    if len(set(vertices)) != n:
        raise GraphError("vertex ids must be unique")
    if m.shape != (n,) or W.shape != (n, n):
        raise GraphError(f"shape mismatch: {n} vertices, measure {m.shape}, weights {W.shape}")
    if not np.all(np.isfinite(m)) or np.any(m <= 0):
        bad = vertices[int(np.flatnonzero(~(m > 0))[0])] if np.any(~(m > 0)) else "?"
        raise GraphError(f"non-positive measure at vertex {bad!r}")
    if not np.all(np.isfinite(W)) or np.any(W < 0):
        raise GraphError("edge weights must be finite and non-negative")
    if np.any(np.diag(W) != 0):
        i = int(np.flatnonzero(np.diag(W))[0])
        raise GraphError(f"self-loop at vertex {vertices[i]!r}")
    one_way = (W > 0) != (W.T > 0)
    if np.any(one_way):
        i, j = np.argwhere(one_way)[0]
        a, b = (vertices[i], vertices[j]) if W[i, j] > 0 else (vertices[j], vertices[i])
        raise GraphError(f"edge {a!r}->{b!r} has no reverse edge")
    return WeightedGraph(vertices, m, W)


def build_graph(
    vertices: Iterable[tuple[str, float]],
    edges: Iterable[tuple[str, str, float]],
    symmetric: bool = True,
) -> WeightedGraph:
    """Build a graph from ``(id, measure)`` pairs and ``(from, to, weight)`` triples.

    With ``symmetric`` set, every edge is mirrored with equal weight. Without it,
    each positive edge needs an explicitly listed positive reverse edge.
    Repeated edges are rejected.
    """
    vertices = list(vertices)
    ids = [str(v) for v, _ in vertices]
    if len(set(ids)) != len(ids):
        dup = next(v for v in ids if ids.count(v) > 1)
        raise GraphError(f"duplicate vertex id {dup!r}")
    index = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    m = np.array([float(mu) for _, mu in vertices])
    W = np.zeros((n, n))
    seen = set()
    for a, b, w in edges:
        a, b, w = str(a), str(b), float(w)
        if a not in index or b not in index:
            raise GraphError(f"edge ({a!r}, {b!r}) references an unknown vertex")
        if a == b:
            raise GraphError(f"self-loop at vertex {a!r}")
        if not w >= 0 or not math.isfinite(w):
            raise GraphError(f"edge ({a!r}, {b!r}) has invalid weight {w}")
        pairs = [(a, b), (b, a)] if symmetric else [(a, b)]
        for p, q in pairs:
            if (p, q) in seen:
                raise GraphError(f"edge ({p!r}, {q!r}) listed twice")
            seen.add((p, q))
            W[index[p], index[q]] = w
    return from_arrays(ids, m, W)


def as_function(G: WeightedGraph, f) -> np.ndarray:
    """Coerce a vertex function (mapping or array) to an aligned float array."""
    if isinstance(f, Mapping):
        missing = [v for v in G.vertices if v not in f]
        if missing:
            raise GraphError(f"function undefined at {missing[0]!r}")
        return np.array([float(f[v]) for v in G.vertices])
    arr = np.asarray(f, dtype=float)
    if arr.shape[0] != G.n:
        raise GraphError(f"function has {arr.shape[0]} values for {G.n} vertices")
    return arr


def indicator(G: WeightedGraph, v: str) -> np.ndarray:
    e = np.zeros(G.n)
    e[G.idx(v)] = 1.0
    return e


def degrees(G: WeightedGraph) -> np.ndarray:
    return G.weights.sum(axis=1) / G.measure


def degree(G: WeightedGraph, x: str) -> float:
    """D_x = (1/m(x)) * sum_y w(x, y)."""
    return float(degrees(G)[G.idx(x)])


def _col(m: np.ndarray, F: np.ndarray) -> np.ndarray:
    return m if F.ndim == 1 else m[:, None]


def laplacian_all(G: WeightedGraph, f) -> np.ndarray:
    F = as_function(G, f)
    W = G.weights
    return (W @ F - _col(W.sum(axis=1), F) * F) / _col(G.measure, F)


def gamma_all(G: WeightedGraph, f, g) -> np.ndarray:
    """Gamma(f, g) at every vertex; batches are paired column by column."""
    F, H = as_function(G, f), as_function(G, g)
    W = G.weights
    # sum_y w(x,y) (f_y - f_x)(g_y - g_x) expanded to avoid an n x n x k tensor
    s = W @ (F * H) - F * (W @ H) - H * (W @ F) + _col(W.sum(axis=1), F) * F * H
    return 0.5 * s / _col(G.measure, F)


def gamma2_all(G: WeightedGraph, f, g) -> np.ndarray:
    """Gamma_2(f, g) at every vertex, by composing the Laplacian and Gamma."""
    F, H = as_function(G, f), as_function(G, g)
    return 0.5 * (
        laplacian_all(G, gamma_all(G, F, H))
        - gamma_all(G, laplacian_all(G, F), H)
        - gamma_all(G, F, laplacian_all(G, H))
    )


def laplacian(G: WeightedGraph, f, x: str) -> float:
    """Delta f(x) = (1/m(x)) * sum_y (f(y) - f(x)) w(x, y)."""
    return float(laplacian_all(G, f)[G.idx(x)])


def gamma(G: WeightedGraph, f, g, x: str) -> float:
    """Gamma(f, g)(x) = (1/2m(x)) * sum_y (f(y)-f(x)) (g(y)-g(x)) w(x, y)."""
    return float(gamma_all(G, f, g)[G.idx(x)])


def gamma2(G: WeightedGraph, f, g, x: str) -> float:
    """Gamma_2(f, g)(x) = 1/2 (Delta Gamma(f,g) - Gamma(Delta f, g) - Gamma(f, Delta g))(x)."""
    return float(gamma2_all(G, f, g)[G.idx(x)])


def gamma_gram(G: WeightedGraph, F: np.ndarray, H: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    """Gram tensor T[r, i, j] = Gamma(F[:, i], H[:, j]) at vertex rows[r]."""
    W = G.weights[list(rows)]
    out = np.empty((len(rows), F.shape[1], H.shape[1]))
    for r, y in enumerate(rows):
        w = W[r]
        nb = np.flatnonzero(w)
        dF = F[nb] - F[y]
        dH = H[nb] - H[y]
        out[r] = (dF * w[nb, None]).T @ dH
    return 0.5 * out / G.measure[list(rows), None, None]


def gamma2_gram(G: WeightedGraph, x: str, basis: np.ndarray) -> np.ndarray:
    """Matrix of the bilinear form (f, g) -> Gamma_2(f, g)(x) on the given basis columns.

    Built from the operator definitions: Delta applied to the Gram of Gamma on
    the 1-ball, minus the Gamma Gram of (Delta f, g) at x and its transpose.
    """
    i = G.idx(x)
    nb = np.flatnonzero(G.weights[i])
    rows = [i, *nb]
    T = gamma_gram(G, basis, basis, rows)
    lap_row = G.weights[i, nb] / G.measure[i]
    delta_gamma = np.tensordot(lap_row, T[1:] - T[0], axes=1)
    cross = gamma_gram(G, laplacian_all(G, basis), basis, [i])[0]
    return 0.5 * (delta_gamma - cross - cross.T)


def scale_weights(G: WeightedGraph, lam: float) -> WeightedGraph:
    """G_lambda = (G, lambda * w, m)."""
    if not lam > 0:
        raise GraphError(f"scale factor must be positive, got {lam}")
    return WeightedGraph(G.vertices, G.measure.copy(), G.weights * float(lam))


def ball(G: WeightedGraph, x: str, r: int = 2) -> list[str]:
    """Vertices reachable from x by at most r out-edges, x first, then by distance and index."""
    if r not in (0, 1, 2):
        raise GraphError("ball radius must be 0, 1 or 2")
    return [G.vertices[k] for k in ball_indices(G, G.idx(x), r)]


def ball_indices(G: WeightedGraph, i: int, r: int = 2) -> list[int]:
    order = [i]
    seen = {i}
    frontier = [i]
    for _ in range(r):
        nxt = sorted({int(j) for k in frontier for j in np.flatnonzero(G.weights[k])} - seen)
        order.extend(nxt)
        seen.update(nxt)
        frontier = nxt
    return order


def spheres(G: WeightedGraph, x: str) -> tuple[list[int], list[int]]:
    """Index lists of the 1-sphere and 2-sphere around x."""
    i = G.idx(x)
    s1 = sorted(int(j) for j in np.flatnonzero(G.weights[i]))
    s2 = sorted({int(k) for j in s1 for k in np.flatnonzero(G.weights[j])} - set(s1) - {i})
    return s1, s2


def is_connected(G: WeightedGraph) -> bool:
    if G.n == 0:
        return True
    return len(component(G, 0)) == G.n


def component(G: WeightedGraph, i: int) -> set[int]:
    seen = {i}
    stack = [i]
    while stack:
        k = stack.pop()
        for j in np.flatnonzero(G.weights[k]):
            j = int(j)
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen
