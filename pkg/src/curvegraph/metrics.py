"""Distances on weighted graphs: weighted path distance, degree path metric, resistance metric."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import GraphError, WeightedGraph, component, degrees, laplacian_all
from .warped import WarpedProductSpec, _require_warped, doubly_warped_product, product_vertex_id

LENGTH_MODES = ("weight", "inverse_sqrt_weight")


class Unreachable(GraphError):
    pass


@dataclass(frozen=True)
class MetricResult:
    kind: str
    pair: tuple[str, str]
    value: float
    path: list[str] | None = None
    potential: np.ndarray | None = field(default=None, repr=False)


def _require_symmetric(G: WeightedGraph, what: str):
    if not G.is_symmetric:
        raise GraphError(f"{what} needs symmetric edge weights")


def edge_lengths(G: WeightedGraph, mode: str = "weight") -> np.ndarray:
    """Per-edge lengths (inf where there is no edge)."""
    W = G.weights
    L = np.full(W.shape, math.inf)
    mask = W > 0
    if mode == "weight":
        L[mask] = W[mask]
    elif mode == "inverse_sqrt_weight":
        L[mask] = W[mask] ** -0.5
    elif mode == "degree":
        D = degrees(G)
        M = np.maximum(D[:, None], D[None, :])
        L[mask] = M[mask] ** -0.5
    else:
        raise ValueError(f"unknown length mode {mode!r}")
    return L


def shortest_path(L: np.ndarray, s: int, t: int) -> tuple[float, list[int]]:
    """Dijkstra on a dense length matrix; returns (distance, index path)."""
    n = L.shape[0]
    dist = np.full(n, math.inf)
    prev = np.full(n, -1)
    dist[s] = 0.0
    heap = [(0.0, s)]
    done = np.zeros(n, dtype=bool)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == t:
            break
        for v in np.flatnonzero(np.isfinite(L[u])):
            nd = d + L[u, v]
            if nd < dist[v]:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, int(v)))
    if not math.isfinite(dist[t]):
        return math.inf, []
    path = [t]
    while path[-1] != s:
        path.append(int(prev[path[-1]]))
    return float(dist[t]), path[::-1]


def _path_metric(G, x, y, mode, kind) -> MetricResult:
    _require_symmetric(G, kind)
    s, t = G.idx(x), G.idx(y)
    d, path = shortest_path(edge_lengths(G, mode), s, t)
    if not math.isfinite(d):
        raise Unreachable(f"{y!r} is unreachable from {x!r}")
    return MetricResult(kind, (x, y), d, [G.vertices[i] for i in path])


def weighted_path_distance(G: WeightedGraph, x: str, y: str, length_mode: str = "weight") -> MetricResult:
    if length_mode not in LENGTH_MODES:
        raise ValueError(f"unknown length mode {length_mode!r}")
    return _path_metric(G, x, y, length_mode, "path")


def degree_path_metric(G: WeightedGraph, x: str, y: str) -> MetricResult:
    """Shortest path with edge length max(D_u, D_v)^(-1/2)."""
    return _path_metric(G, x, y, "degree", "degree-path")


def distance_table(G: WeightedGraph, mode: str = "weight") -> np.ndarray:
    """All-pairs distances by repeated Dijkstra."""
    L = edge_lengths(G, mode)
    n = G.n
    out = np.empty((n, n))
    for s in range(n):
        for t in range(n):
            out[s, t] = shortest_path(L, s, t)[0]
    return out


@dataclass(frozen=True)
class DirichletSolution:
    source: str
    sink: str
    potential: np.ndarray
    energy: float
    residual: float


def dirichlet_solve(G: WeightedGraph, x: str, y: str) -> DirichletSolution:
    """Potential f with f(x) = 0, f(y) = 1 and Delta f = 0 elsewhere on the component."""
    _require_symmetric(G, "resistance metric")
    if not np.allclose(G.measure, 1.0, rtol=0, atol=0):
        raise GraphError("resistance metric undefined: vertex measure must be identically 1")
    s, t = G.idx(x), G.idx(y)
    if s == t:
        raise GraphError("resistance metric needs distinct vertices")
    comp = component(G, s)
    if t not in comp:
        raise Unreachable(f"{y!r} is unreachable from {x!r}")
    W = G.weights
    L = np.diag(W.sum(axis=1)) - W
    interior = sorted(comp - {s, t})
    f = np.zeros(G.n)
    f[t] = 1.0
    if interior:
        A = L[np.ix_(interior, interior)]
        rhs = -L[interior, t]
        f[interior] = np.linalg.solve(A, rhs)
    # vertices outside the component stay at 0; they carry no energy
    energy = 0.5 * float(np.sum(W * (f[None, :] - f[:, None]) ** 2))
    lap = laplacian_all(G, f)
    res = float(np.abs(lap[interior]).max()) if interior else 0.0
    return DirichletSolution(x, y, f, energy, res)


def resistance_metric(G: WeightedGraph, x: str, y: str) -> MetricResult:
    """r(x, y) = energy(f_xy)^(-1/2)."""
    if x == y:
        G.idx(x)
        return MetricResult("resistance", (x, y), 0.0)
    sol = dirichlet_solve(G, x, y)
    return MetricResult("resistance", (x, y), sol.energy ** -0.5, potential=sol.potential)


def metric_table(G: WeightedGraph, kind: str) -> np.ndarray:
    n = G.n
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            x, y = G.vertices[i], G.vertices[j]
            if kind == "path":
                out[i, j] = weighted_path_distance(G, x, y).value
            elif kind == "degree-path":
                out[i, j] = degree_path_metric(G, x, y).value
            elif kind == "resistance":
                out[i, j] = resistance_metric(G, x, y).value
            else:
                raise ValueError(f"unknown metric kind {kind!r}")
    return out


def intrinsic_metric_check(G: WeightedGraph, rho, tol: float = 1e-12) -> bool:
    """Pseudo-metric triangle inequality plus sum_y rho(x,y)^2 w(x,y) <= 1 at every x."""
    _require_symmetric(G, "intrinsic metric check")
    R = np.asarray(rho, dtype=float)
    if R.shape != (G.n, G.n):
        raise GraphError(f"distance table must be {G.n} x {G.n}")
    if np.any(R < -tol) or not np.allclose(R, R.T, atol=tol) or np.any(np.abs(np.diag(R)) > tol):
        return False
    # R[i,k] <= R[i,j] + R[j,k] for all i, j, k
    if np.any(R[:, None, :] > R[:, :, None] + R[None, :, :] + tol):
        return False
    return bool(np.all(np.sum(R**2 * G.weights, axis=1) <= 1 + tol))


# product experiments


def _hop_distance_to(G2: WeightedGraph, start: int, targets: set[int]) -> float:
    if not targets:
        return math.inf
    seen = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            if u in targets:
                return float(seen[u])
            for v in np.flatnonzero(G2.weights[u]):
                v = int(v)
                if v not in seen:
                    seen[v] = seen[u] + 1
                    nxt.append(v)
        frontier = nxt
    return math.inf


@dataclass(frozen=True)
class GeodesicReport:
    hypothesis: bool
    hypothesis_lhs: float
    hypothesis_rhs: float
    agreement: dict[str, bool]
    max_deviation: dict[str, float]
    pairs: list = field(default_factory=list, repr=False)


def totally_geodesic_check(spec: WarpedProductSpec, K: list[str], H: list[str], p_star: str, tol: float = 1e-10) -> GeodesicReport:
    """Fiber distances over p_star versus alpha(p_star)^-1 times the G1 distance, on K x K.

    The hypothesis sums G1 weights over unordered edges inside K and uses hop
    distance in G2 from p_star to the boundary of H (vertices of H with a
    neighbor outside H).
    """
    spec = _require_warped(spec)
    G1, G2 = spec.G1, spec.G2
    _require_symmetric(G1, "totally geodesic check")
    _require_symmetric(G2, "totally geodesic check")
    Hi = [G2.idx(p) for p in H]
    Ki = [G1.idx(x) for x in K]
    ip = G2.idx(p_star)
    if ip not in Hi:
        raise GraphError("p_star must lie in H")
    a_star = spec.alpha[ip]
    if np.any(spec.alpha[Hi] > a_star):
        raise GraphError("p_star is not a maximum of alpha on H")

    Hs = set(Hi)
    boundary = {h for h in Hi if any(int(q) not in Hs for q in np.flatnonzero(G2.weights[h]))}
    d_boundary = _hop_distance_to(G2, ip, boundary)
    ks = set(Ki)
    lhs = sum(G1.weights[i, j] for i in Ki for j in Ki if i < j and j in ks) / a_star
    h_edges = [G2.weights[i, j] for i in Hi for j in Hi if G2.weights[i, j] > 0]
    w_min = min(h_edges) if h_edges else 0.0
    if d_boundary == 0:
        rhs = 0.0
    elif math.isinf(d_boundary):
        rhs = math.inf
    else:
        rhs = 2 * d_boundary * float((1 / spec.beta).min()) * w_min

    P = doubly_warped_product(spec)
    agreement, dev, pairs = {}, {}, []
    for mode in LENGTH_MODES:
        dev[mode] = 0.0
        for a in K:
            for b in K:
                d1 = weighted_path_distance(G1, a, b, mode).value
                dp = weighted_path_distance(P, product_vertex_id(a, p_star), product_vertex_id(b, p_star), mode).value
                claim = d1 / a_star
                dev[mode] = max(dev[mode], abs(dp - claim))
                pairs.append((mode, a, b, dp, claim))
        agreement[mode] = dev[mode] <= tol
    return GeodesicReport(bool(lhs < rhs), float(lhs), float(rhs), agreement, dev, pairs)


@dataclass(frozen=True)
class ResistanceExperiment:
    measured: float
    claimed: float
    factor: float
    alpha_inv_l2: float

    @property
    def relative_deviation(self) -> float:
        return abs(self.measured - self.claimed) / abs(self.claimed)


def product_resistance_experiment(spec: WarpedProductSpec, x: str, y: str, p: str) -> ResistanceExperiment:
    """Resistance between (x,p) and (y,p) against r_G1(x,y) / ||alpha^-1||_2."""
    spec = _require_warped(spec)
    P = doubly_warped_product(spec)
    measured = resistance_metric(P, product_vertex_id(x, p), product_vertex_id(y, p)).value
    r1 = resistance_metric(spec.G1, x, y).value
    norm = float(np.sqrt(np.sum(spec.alpha ** -2.0)))
    return ResistanceExperiment(measured, r1 / norm, r1, norm)
