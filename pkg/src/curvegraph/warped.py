"""Doubly warped and twisted products of weighted graphs, and curvature bounds on them.

For factors G1, G2 and warping functions alpha (on G2) and beta (on G1) the
product lives on pairs (x, p) with measure m1(x) m2(p). Edges run along one
factor at a time:

    w((x,p), (y,p)) = m2(p) alpha(p)^-2 w1(x,y)
    w((x,p), (x,q)) = m1(x) beta(x)^-2 w2(p,q)

In the twisted variant alpha and beta are functions of the pair and are
evaluated at the edge's source vertex.

Product vertices are numbered ``ix * n2 + ip`` and named ``"x|p"``. Functions
on the product are arrays of length n1 * n2 in that order.

Bounds are computed from factor data at the point: every G1 operator is
evaluated at x and every G2 operator at p, with alpha = alpha(p), beta = beta(x).
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import curvature as cv
from .graph import (
    GraphError,
    WeightedGraph,
    as_function,
    check_dim,
    degrees,
    gamma_all,
    gamma2_all,
    inv_dim,
    laplacian_all,
)

BOUND_TOL = 1e-8


def product_vertex_id(x: str, p: str) -> str:
    return f"{x}|{p}"


def _positive(values, n: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.shape[0] != n:
        raise GraphError(f"{what} has {arr.shape[0]} entries, expected {n}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise GraphError(f"{what} must be strictly positive")
    return arr


@dataclass(frozen=True, eq=False)
class WarpedProductSpec:
    """Factors plus alpha on G2's vertices and beta on G1's vertices."""

    G1: WeightedGraph
    G2: WeightedGraph
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive(_table(self.G2, self.alpha), self.G2.n, "alpha"))
        object.__setattr__(self, "beta", _positive(_table(self.G1, self.beta), self.G1.n, "beta"))

    @property
    def alpha_grid(self) -> np.ndarray:
        return np.broadcast_to(self.alpha[None, :], (self.G1.n, self.G2.n))

    @property
    def beta_grid(self) -> np.ndarray:
        return np.broadcast_to(self.beta[:, None], (self.G1.n, self.G2.n))


@dataclass(frozen=True, eq=False)
class TwistedProductSpec:
    """Factors plus alpha, beta given on the product, as (n1, n2) arrays."""

    G1: WeightedGraph
    G2: WeightedGraph
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        shape = (self.G1.n, self.G2.n)
        for name in ("alpha", "beta"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise GraphError(f"{name} must have shape {shape}, got {arr.shape}")
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
                raise GraphError(f"{name} must be strictly positive")
            object.__setattr__(self, name, arr)

    @property
    def alpha_grid(self) -> np.ndarray:
        return self.alpha

    @property
    def beta_grid(self) -> np.ndarray:
        return self.beta


def _table(G: WeightedGraph, values) -> np.ndarray:
    if isinstance(values, Mapping):
        return as_function(G, values)
    return np.asarray(values, dtype=float).reshape(-1)


def doubly_warped_product(spec: WarpedProductSpec | TwistedProductSpec) -> WeightedGraph:
    G1, G2 = spec.G1, spec.G2
    n1, n2 = G1.n, G2.n
    a2 = spec.alpha_grid ** -2.0
    b2 = spec.beta_grid ** -2.0
    W = np.zeros((n1, n2, n1, n2))
    # G1 direction: (x,p) -> (y,p)
    horiz = G1.weights[:, None, :] * (G2.measure[None, :, None] * a2[:, :, None])
    W[:, np.arange(n2), :, np.arange(n2)] = np.moveaxis(horiz, 1, 0)
    # G2 direction: (x,p) -> (x,q)
    vert = G2.weights[None, :, :] * (G1.measure[:, None, None] * b2[:, :, None])
    W[np.arange(n1), :, np.arange(n1), :] = vert
    W = W.reshape(n1 * n2, n1 * n2)
    ids = tuple(product_vertex_id(x, p) for x in G1.vertices for p in G2.vertices)
    m = np.outer(G1.measure, G2.measure).reshape(-1)
    return WeightedGraph(ids, m, W)


def is_constant_along(spec: TwistedProductSpec) -> bool:
    """Whether alpha ignores G1 and beta ignores G2, so the twist is a warp."""
    return bool(np.all(spec.alpha == spec.alpha[:1, :]) and np.all(spec.beta == spec.beta[:, :1]))


def as_warped(spec: TwistedProductSpec) -> WarpedProductSpec:
    if not is_constant_along(spec):
        raise GraphError("twisting functions depend on both factors")
    return WarpedProductSpec(spec.G1, spec.G2, spec.alpha[0].copy(), spec.beta[:, 0].copy())


def _require_warped(spec) -> WarpedProductSpec:
    if isinstance(spec, TwistedProductSpec):
        return as_warped(spec)
    return spec


def _point(spec, point) -> tuple[int, int]:
    x, p = point
    return spec.G1.idx(x), spec.G2.idx(p)


def _grid(spec, u) -> np.ndarray:
    n1, n2 = spec.G1.n, spec.G2.n
    u = np.asarray(u, dtype=float)
    if u.shape[0] != n1 * n2:
        raise GraphError(f"product function has {u.shape[0]} values, expected {n1 * n2}")
    return u.reshape(n1, n2)


def lift_sum(f1, f2) -> np.ndarray:
    """u1 (+) u2: (x, p) -> f1(x) + f2(p)."""
    return (np.asarray(f1, float)[:, None] + np.asarray(f2, float)[None, :]).reshape(-1)


def lift_tensor(f1, f2) -> np.ndarray:
    """u1 (x) u2: (x, p) -> f1(x) f2(p)."""
    return np.outer(np.asarray(f1, float), np.asarray(f2, float)).reshape(-1)


# operator identities


def check_operator_splitting(spec, u, v, point, product: WeightedGraph | None = None) -> tuple[float, float]:
    """Residuals of the fiberwise splitting of Delta u and Gamma(u, v) at a point."""
    P = product if product is not None else doubly_warped_product(spec)
    ix, ip = _point(spec, point)
    U, V = _grid(spec, u), _grid(spec, v)
    a2 = spec.alpha_grid[ix, ip] ** -2.0
    b2 = spec.beta_grid[ix, ip] ** -2.0
    k = ix * spec.G2.n + ip
    lap = a2 * laplacian_all(spec.G1, U[:, ip])[ix] + b2 * laplacian_all(spec.G2, U[ix, :])[ip]
    gam = a2 * gamma_all(spec.G1, U[:, ip], V[:, ip])[ix] + b2 * gamma_all(spec.G2, U[ix, :], V[ix, :])[ip]
    r1 = abs(laplacian_all(P, np.asarray(u, float))[k] - lap)
    r2 = abs(gamma_all(P, np.asarray(u, float), np.asarray(v, float))[k] - gam)
    return float(r1), float(r2)


@dataclass(frozen=True)
class Gamma2Split:
    """Decomposition of Gamma_2 on the product into fiber terms and cross terms."""

    fiber1: float
    fiber2: float
    cross1: float  # the term carrying (1/2) alpha^-2
    cross2: float  # the term carrying (1/2) beta^-2
    total: float
    direct: float

    @property
    def residual(self) -> float:
        return abs(self.total - self.direct)


def gamma2_first_formulation(spec, u, v, point, product: WeightedGraph | None = None) -> Gamma2Split:
    """Gamma_2(u, v)(x,p) from factor operators applied to fibers of u and v.

    The second cross term applies alpha^-2 Delta^{G1} inside Gamma^{G2}; this is
    what the composition of operators gives.
    """
    spec = _require_warped(spec)
    G1, G2 = spec.G1, spec.G2
    P = product if product is not None else doubly_warped_product(spec)
    ix, ip = _point(spec, point)
    U, V = _grid(spec, u), _grid(spec, v)
    a = spec.alpha ** -2.0  # on G2
    b = spec.beta ** -2.0  # on G1

    f1 = a[ip] ** 2 * gamma2_all(G1, U[:, ip], V[:, ip])[ix]
    f2 = b[ix] ** 2 * gamma2_all(G2, U[ix, :], V[ix, :])[ip]

    # fields over the other factor: Gamma^{G2}(u^y, v^y)(p) for every y, etc.
    g2_by_y = gamma_all(G2, U.T, V.T)[ip]  # indexed by y in G1
    lap2u_by_y = laplacian_all(G2, U.T)[ip]
    lap2v_by_y = laplacian_all(G2, V.T)[ip]
    I = (
        laplacian_all(G1, b * g2_by_y)[ix]
        - gamma_all(G1, b * lap2v_by_y, U[:, ip])[ix]
        - gamma_all(G1, b * lap2u_by_y, V[:, ip])[ix]
    )
    g1_by_q = gamma_all(G1, U, V)[ix]  # indexed by q in G2
    lap1u_by_q = laplacian_all(G1, U)[ix]
    lap1v_by_q = laplacian_all(G1, V)[ix]
    II = (
        laplacian_all(G2, a * g1_by_q)[ip]
        - gamma_all(G2, a * lap1v_by_q, U[ix, :])[ip]
        - gamma_all(G2, a * lap1u_by_q, V[ix, :])[ip]
    )
    c1 = 0.5 * a[ip] * I
    c2 = 0.5 * b[ix] * II
    k = ix * G2.n + ip
    direct = gamma2_all(P, np.asarray(u, float), np.asarray(v, float))[k]
    return Gamma2Split(float(f1), float(f2), float(c1), float(c2), float(f1 + f2 + c1 + c2), float(direct))


def gamma2_tensor_formulation(spec, u1, u2, point, v1=None, v2=None, product: WeightedGraph | None = None) -> Gamma2Split:
    """Gamma_2(u1 (x) u2, v1 (x) v2)(x,p) from factor data (v defaults to u).

    The first cross term uses Delta^{G1}(u1 v1 beta^-2).
    """
    spec = _require_warped(spec)
    G1, G2 = spec.G1, spec.G2
    P = product if product is not None else doubly_warped_product(spec)
    ix, ip = _point(spec, point)
    u1 = as_function(G1, u1)
    u2 = as_function(G2, u2)
    v1 = u1 if v1 is None else as_function(G1, v1)
    v2 = u2 if v2 is None else as_function(G2, v2)
    a = spec.alpha ** -2.0
    b = spec.beta ** -2.0

    L1u, L1v = laplacian_all(G1, u1)[ix], laplacian_all(G1, v1)[ix]
    L2u, L2v = laplacian_all(G2, u2)[ip], laplacian_all(G2, v2)[ip]
    f1 = u2[ip] * v2[ip] * a[ip] ** 2 * gamma2_all(G1, u1, v1)[ix]
    f2 = u1[ix] * v1[ix] * b[ix] ** 2 * gamma2_all(G2, u2, v2)[ip]
    I = (
        gamma_all(G2, u2, v2)[ip] * laplacian_all(G1, u1 * v1 * b)[ix]
        - v2[ip] * L2u * gamma_all(G1, u1 * b, v1)[ix]
        - u2[ip] * L2v * gamma_all(G1, v1 * b, u1)[ix]
    )
    II = (
        gamma_all(G1, u1, v1)[ix] * laplacian_all(G2, u2 * v2 * a)[ip]
        - v1[ix] * L1u * gamma_all(G2, u2 * a, v2)[ip]
        - u1[ix] * L1v * gamma_all(G2, v2 * a, u2)[ip]
    )
    c1 = 0.5 * a[ip] * I
    c2 = 0.5 * b[ix] * II
    k = ix * G2.n + ip
    direct = gamma2_all(P, lift_tensor(u1, u2), lift_tensor(v1, v2))[k]
    return Gamma2Split(float(f1), float(f2), float(c1), float(c2), float(f1 + f2 + c1 + c2), float(direct))


# local warp data and the Q forms


@dataclass(frozen=True)
class WarpData:
    """Scalars at (x, p) entering every product bound."""

    alpha: float
    beta: float
    Dx: float
    Dp: float
    lap2_ainv: float  # Delta^{G2} alpha^-2 at p
    lap1_binv: float  # Delta^{G1} beta^-2 at x
    gam1_binv: float  # Gamma^{G1}(beta^-2) at x
    gam2_ainv: float  # Gamma^{G2}(alpha^-2) at p

    @property
    def a2(self) -> float:
        return self.alpha ** -2.0

    @property
    def b2(self) -> float:
        return self.beta ** -2.0


def warp_data(spec, point) -> WarpData:
    spec = _require_warped(spec)
    ix, ip = _point(spec, point)
    ainv = spec.alpha ** -2.0
    binv = spec.beta ** -2.0
    return WarpData(
        alpha=float(spec.alpha[ip]),
        beta=float(spec.beta[ix]),
        Dx=float(degrees(spec.G1)[ix]),
        Dp=float(degrees(spec.G2)[ip]),
        lap2_ainv=float(laplacian_all(spec.G2, ainv)[ip]),
        lap1_binv=float(laplacian_all(spec.G1, binv)[ix]),
        gam1_binv=float(gamma_all(spec.G1, binv, binv)[ix]),
        gam2_ainv=float(gamma_all(spec.G2, ainv, ainv)[ip]),
    )


def q_form(spec, c1: float, c2: float, f1, f2, point) -> float:
    """Q(c1, c2), the part of Gamma_2(c1 f1 (+) c2 f2) not carried by the factor Gamma_2's."""
    spec = _require_warped(spec)
    ix, ip = _point(spec, point)
    f1 = as_function(spec.G1, f1)
    f2 = as_function(spec.G2, f2)
    a = spec.alpha ** -2.0
    b = spec.beta ** -2.0
    w = warp_data(spec, point)
    g1 = gamma_all(spec.G1, f1, f1)[ix]
    g2 = gamma_all(spec.G2, f2, f2)[ip]
    return float(
        0.5 * c2 * c2 * w.a2 * g2 * w.lap1_binv
        - c1 * c2 * w.a2 * laplacian_all(spec.G2, f2)[ip] * gamma_all(spec.G1, b, f1)[ix]
        + 0.5 * c1 * c1 * w.b2 * g1 * w.lap2_ainv
        - c1 * c2 * w.b2 * laplacian_all(spec.G1, f1)[ix] * gamma_all(spec.G2, a, f2)[ip]
    )


def _q1(w: WarpData, c1: float, c2: float, nz1: bool, nz2: bool) -> float:
    q = 0.5 * c1 * c1 * w.b2 * w.lap2_ainv
    cc = abs(c1 * c2)
    if nz1:
        q += cc * w.b2 * w.Dx
    if nz2:
        q += 0.5 * cc * w.a2 * w.gam1_binv
    return q


def _q2(w: WarpData, c1: float, c2: float, nz1: bool, nz2: bool) -> float:
    q = 0.5 * c2 * c2 * w.a2 * w.lap1_binv
    cc = abs(c1 * c2)
    if nz2:
        q += cc * w.a2 * w.Dp
    if nz1:
        q += 0.5 * cc * w.b2 * w.gam2_ainv
    return q


def q1_q2_bounds(spec, point, c1: float, c2: float, laplacian_flags=(True, True)) -> tuple[float, float]:
    """Coefficients (Q1, Q2) with Q(c1, c2) <= Q1 Gamma^{G1}(f1) + Q2 Gamma^{G2}(f2).

    ``laplacian_flags`` says whether Delta^{G1} f1(x) and Delta^{G2} f2(p) are
    nonzero; a zero Laplacian drops the cross term it controls.
    """
    nz1, nz2 = (bool(f) for f in laplacian_flags)
    w = warp_data(spec, point)
    return _q1(w, c1, c2, nz1, nz2), _q2(w, c1, c2, nz1, nz2)


# curvature bounds on the product


class CurvatureCache:
    """Memoized curvature results for the vertices of one graph."""

    def __init__(self, G: WeightedGraph):
        self.G = G
        self._memo: dict[tuple[str, float], cv.CurvatureResult] = {}

    def __call__(self, x: str, N: float) -> cv.CurvatureResult:
        key = (x, float(N))
        if key not in self._memo:
            self._memo[key] = cv.curvature_function(self.G, x, N)
        return self._memo[key]

    def value(self, x: str, N: float) -> float:
        return self(x, N).value


@dataclass
class ProductContext:
    """A spec with its product graph and curvature caches for all three graphs."""

    spec: WarpedProductSpec
    product: WeightedGraph = None
    k1: CurvatureCache = None
    k2: CurvatureCache = None
    kp: CurvatureCache = None

    def __post_init__(self):
        self.spec = _require_warped(self.spec)
        if self.product is None:
            self.product = doubly_warped_product(self.spec)
        self.k1 = self.k1 or CurvatureCache(self.spec.G1)
        self.k2 = self.k2 or CurvatureCache(self.spec.G2)
        self.kp = self.kp or CurvatureCache(self.product)

    def exact(self, point, N: float) -> float:
        return self.kp.value(product_vertex_id(*point), N)


def _ctx(spec) -> ProductContext:
    return spec if isinstance(spec, ProductContext) else ProductContext(spec)


def dim_sum(N1: float, N2: float) -> float:
    return check_dim(N1) + check_dim(N2)  # inf is absorbing in float arithmetic


def sandwich_bounds(spec, point, N1: float, N2: float) -> tuple[float, float]:
    """(min, max) of alpha^-2 K_{G1,x}(N1) and beta^-2 K_{G2,p}(N2)."""
    ctx = _ctx(spec)
    x, p = point
    w = warp_data(ctx.spec, point)
    t1 = w.a2 * ctx.k1.value(x, N1)
    t2 = w.b2 * ctx.k2.value(p, N2)
    return min(t1, t2), max(t1, t2)


def degree_correction(Na: float, Nb: float) -> float:
    """2 Nb / (Na (Na + Nb)) with the limits at infinity."""
    Na, Nb = check_dim(Na), check_dim(Nb)
    if math.isinf(Na):
        return 0.0
    if math.isinf(Nb):
        return 2.0 / Na
    return 2.0 * Nb / (Na * (Na + Nb))


def _sat_class(c: str) -> str:
    if c in (cv.WEAK, cv.STRONG):
        return "saturated"
    return c


@dataclass(frozen=True)
class SaturationBound:
    case: int | str  # 1..4, or "ambiguous"
    bound: float | None
    refinement: float | None  # min form, when both are weak but not strong
    extra: dict = field(default_factory=dict)  # other bounds that also apply
    classes: tuple[str, str] = ("", "")


def saturation_upper_bound(spec, point, N1: float, N2: float) -> SaturationBound:
    """Upper bound on K_{(x,p)}(N1 + N2) selected by the saturation of x and p."""
    ctx = _ctx(spec)
    x, p = point
    w = warp_data(ctx.spec, point)
    r1, r2 = ctx.k1(x, N1), ctx.k2(p, N2)
    classes = (r1.saturation, r2.saturation)
    if cv.AMBIGUOUS in classes:
        return SaturationBound("ambiguous", None, None, {}, classes)

    K1, K2 = r1.value, r2.value
    a, b = w.alpha, w.beta
    side1 = w.a2 * K1 + a * a * _q1(w, 1, 0, True, True)
    side2 = w.b2 * K2 + b * b * _q2(w, 0, 1, True, True)
    corr1 = degree_correction(N1, N2) * w.Dx
    corr2 = degree_correction(N2, N1) * w.Dp
    case4 = max(w.a2 * K1 + a * a * _q1(w, 1, 1, True, True), w.b2 * K2 + b * b * _q2(w, 1, 1, True, True))

    s1, s2 = (_sat_class(c) for c in classes)
    refinement = None
    extra = {}
    if s1 == "saturated" and s2 == "saturated":
        case, bound = 1, max(side1, side2)
        if classes == (cv.WEAK, cv.WEAK):
            refinement = min(side1 + corr1, side2 + corr2)
    elif s1 == "saturated":
        case, bound = 2, side1 + corr1
    elif s2 == "saturated":
        case, bound = 3, side2 + corr2
    else:
        case, bound = 4, case4
    if case != 4 and cv.STRONG not in classes:
        extra["neither_strong"] = case4
    return SaturationBound(case, bound, refinement, extra, classes)


def same_dimension_bounds(spec, point, N: float) -> tuple[float, float]:
    """(upper, lower) for K_{(x,p)}(N) from factor curvatures at the same N."""
    ctx = _ctx(spec)
    x, p = point
    w = warp_data(ctx.spec, point)
    K1, K2 = ctx.k1.value(x, N), ctx.k2.value(p, N)
    upper = min(
        w.a2 * K1 + 0.5 * w.alpha**2 * w.b2 * w.lap2_ainv,
        w.b2 * K2 + 0.5 * w.beta**2 * w.a2 * w.lap1_binv,
    )
    lower = min(w.a2 * K1, w.b2 * K2) - inv_dim(N) * (w.a2 * w.Dx + w.b2 * w.Dp)
    return upper, lower


@dataclass(frozen=True)
class ConvexityReport:
    predicates: dict[str, bool]
    max_bound: float | None  # at N1 + N2, when both warped-convexity conditions hold
    min_bound: float | None  # at N, when both geodesic-convexity conditions hold
    max_dim: float = math.nan
    min_dim: float = math.nan

    @property
    def conditions_met(self) -> bool:
        return self.max_bound is not None or self.min_bound is not None


def convexity_corollary_bounds(spec, point, N, K1: float, K2: float) -> ConvexityReport:
    """Discrete convexity predicates on alpha, beta and the bounds they unlock.

    ``N`` is a single dimension (factors at N for both bounds, product at 2N
    and N) or a pair (N1, N2) (product at N1 + N2 for both).
    The second predicate of the first pair uses Delta^{G1} beta^-2, the only
    reading under which beta is differentiated along its own factor.
    """
    if K1 < 0 or K2 < 0:
        raise ValueError("K1 and K2 must be non-negative")
    ctx = _ctx(spec)
    x, p = point
    w = warp_data(ctx.spec, point)
    a_sq, b_sq = w.alpha**2, w.beta**2
    if isinstance(N, Sequence) and not isinstance(N, str):
        N1, N2 = (check_dim(n) for n in N)
        Nmin = N1 + N2
        Nmin1 = Nmin2 = Nmin
    else:
        N1 = N2 = Nmin = Nmin1 = Nmin2 = check_dim(N)
    preds = {
        "warped_convex_1": a_sq * w.lap2_ainv <= -2 * b_sq * K1 - 2 * a_sq * w.Dx - b_sq * w.gam1_binv,
        "warped_convex_2": b_sq * w.lap1_binv <= -2 * a_sq * K2 - 2 * b_sq * w.Dp - a_sq * w.gam2_ainv,
        "geodesic_convex_1": a_sq * w.lap2_ainv <= -w.a2 * b_sq * K1,
        "geodesic_convex_2": b_sq * w.lap1_binv <= -w.b2 * a_sq * K2,
    }
    max_bound = min_bound = None
    if preds["warped_convex_1"] and preds["warped_convex_2"]:
        max_bound = max((ctx.k1.value(x, N1) - K1) / a_sq, (ctx.k2.value(p, N2) - K2) / b_sq)
    if preds["geodesic_convex_1"] and preds["geodesic_convex_2"]:
        min_bound = min((ctx.k1.value(x, Nmin1) - K1) / a_sq, (ctx.k2.value(p, Nmin2) - K2) / b_sq)
    return ConvexityReport(preds, max_bound, min_bound, N1 + N2, Nmin)


def intersection_margin(spec, point) -> tuple[float, float]:
    """(lhs, rhs) of the strict differential inequality on alpha, beta at a point."""
    w = warp_data(spec, point)
    if w.Dx <= 0 or w.Dp <= 0:
        raise GraphError("intersection inequality needs positive degrees")
    lhs = w.lap2_ainv * w.lap1_binv
    rhs = w.a2 * w.beta**2 * w.gam1_binv / w.Dx + w.alpha**2 * w.b2 * w.gam2_ainv / w.Dp - 1.0
    return lhs, rhs


def intersection_inequality(spec, point) -> bool:
    """Diagnostic only; the sandwich checker does not depend on it."""
    lhs, rhs = intersection_margin(spec, point)
    return bool(lhs > rhs)


@dataclass(frozen=True)
class Dilation:
    alpha: float
    beta: float
    alpha_beta: float
    beta_alpha: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.alpha, self.beta, self.alpha_beta, self.beta_alpha


def dilation_numbers(spec) -> Dilation:
    a2 = np.asarray(spec.alpha, float) ** 2
    b2 = np.asarray(spec.beta, float) ** 2
    return Dilation(
        float(a2.max() / a2.min()),
        float(b2.max() / b2.min()),
        float(a2.max() / b2.min()),
        float(b2.max() / a2.min()),
    )


def _extrema(values: np.ndarray, which: str) -> list[int]:
    r = np.round(values, 12)
    target = r.min() if which == "min" else r.max()
    return [int(i) for i in np.flatnonzero(r == target)]


@dataclass(frozen=True)
class GoodPairWitness:
    x_min: str
    p_min: str
    lhs1: float
    rhs1: float
    lhs2: float
    rhs2: float
    holds: bool


def good_warping_pair_check(spec, N: float, tol: float = 1e-9) -> tuple[bool, list[GoodPairWitness]]:
    """Check the convexity relations at every pair of minima of beta (on G1) and alpha (on G2)."""
    ctx = _ctx(spec)
    s = ctx.spec
    dil = dilation_numbers(s)
    ainv = s.alpha ** -2.0
    binv = s.beta ** -2.0
    lap1 = laplacian_all(s.G1, binv)
    lap2 = laplacian_all(s.G2, ainv)
    out = []
    for ix in _extrema(s.beta, "min"):
        for ip in _extrema(s.alpha, "min"):
            x, p = s.G1.vertices[ix], s.G2.vertices[ip]
            K1, K2 = ctx.k1.value(x, N), ctx.k2.value(p, N)
            lhs1 = s.beta[ix] ** 2 * lap1[ix]
            rhs1 = dil.alpha * K1 - dil.alpha_beta * K2
            lhs2 = s.alpha[ip] ** 2 * lap2[ip]
            rhs2 = dil.beta * K2 - dil.beta_alpha * K1
            ok = lhs1 <= rhs1 + tol and lhs2 <= rhs2 + tol
            out.append(GoodPairWitness(x, p, float(lhs1), float(rhs1), float(lhs2), float(rhs2), bool(ok)))
    return any(w.holds for w in out), out


@dataclass(frozen=True)
class RigidityVerdict:
    good_pair: bool
    equality_holds: bool
    alpha_constant: bool
    beta_constant: bool
    einstein_G1: bool
    einstein_G2: bool
    curvature_ratio: float
    warp_ratio: float
    ratio_matches: bool
    contradiction: bool
    points: list = field(default_factory=list, repr=False)

    @property
    def applicable(self) -> bool:
        return self.good_pair

    @property
    def conclusion(self) -> bool:
        return (
            self.alpha_constant
            and self.beta_constant
            and self.einstein_G1
            and self.einstein_G2
            and self.ratio_matches
        )


def rigidity_check(spec, N: float, tol: float = 1e-8) -> RigidityVerdict:
    """Compare the product curvature with the sandwich minimum on the extrema of alpha and beta.

    Rigidity predicts that a good pair and equality on the extrema imply constant
    warps, Einstein factors and matched ratios. ``contradiction`` flags an
    instance where the hypotheses hold and the conclusion does not.
    """
    ctx = _ctx(spec)
    s = ctx.spec
    good, _ = good_warping_pair_check(ctx, N)
    Ea = sorted(set(_extrema(s.alpha, "min")) | set(_extrema(s.alpha, "max")))
    Eb = sorted(set(_extrema(s.beta, "min")) | set(_extrema(s.beta, "max")))
    points = []
    eq = True
    for ix in Eb:
        for ip in Ea:
            x, p = s.G1.vertices[ix], s.G2.vertices[ip]
            lo, _ = sandwich_bounds(ctx, (x, p), N, N)
            exact = ctx.exact((x, p), N)
            same = abs(exact - lo) <= tol
            eq = eq and same
            points.append((x, p, exact, lo, same))
    a_const = bool(np.ptp(np.round(s.alpha, 12)) == 0)
    b_const = bool(np.ptp(np.round(s.beta, 12)) == 0)
    e1 = cv.einstein_check(s.G1, N, tol)
    e2 = cv.einstein_check(s.G2, N, tol)
    warp_ratio = float(s.alpha.mean() ** 2 / s.beta.mean() ** 2) if a_const and b_const else math.nan
    if e2.value != 0:
        k_ratio = e1.value / e2.value
    else:
        k_ratio = math.inf if e1.value != 0 else math.nan
    if a_const and b_const:
        # compare K1 beta^2 with K2 alpha^2 to avoid dividing by a zero curvature
        matches = abs(e1.value * s.beta[0] ** 2 - e2.value * s.alpha[0] ** 2) <= tol * max(
            1.0, abs(e1.value * s.beta[0] ** 2)
        )
    else:
        matches = False
    verdict = RigidityVerdict(
        good_pair=good,
        equality_holds=eq,
        alpha_constant=a_const,
        beta_constant=b_const,
        einstein_G1=e1.is_einstein,
        einstein_G2=e2.is_einstein,
        curvature_ratio=float(k_ratio),
        warp_ratio=warp_ratio,
        ratio_matches=bool(matches),
        contradiction=False,
        points=points,
    )
    contradiction = good and eq and not verdict.conclusion
    return RigidityVerdict(**{**verdict.__dict__, "contradiction": contradiction})


def subharmonic_check(G: WeightedGraph, f, tol: float = 1e-12) -> bool:
    return bool(np.all(laplacian_all(G, f) >= -tol))


# full per-vertex report


@dataclass(frozen=True)
class BoundEntry:
    kind: str
    side: str  # "lo" or "hi"
    value: float
    source: str
    dim: float
    exact: float
    holds: bool


@dataclass(frozen=True)
class BoundReport:
    vertex: tuple[str, str]
    N1: float
    N2: float
    exact: float  # product curvature at N1 + N2
    entries: list[BoundEntry]
    saturation: SaturationBound
    convexity: ConvexityReport
    intersection: bool

    @property
    def violations(self) -> list[BoundEntry]:
        return [e for e in self.entries if not e.holds]


def _entry(kind, side, value, source, dim, exact, tol=BOUND_TOL) -> BoundEntry:
    holds = exact >= value - tol if side == "lo" else exact <= value + tol
    return BoundEntry(kind, side, float(value), source, float(dim), float(exact), bool(holds))


def bound_report(spec, point, N1: float, N2: float, K1: float = 0.0, K2: float = 0.0) -> BoundReport:
    """Every product bound at one vertex, each compared with the exact curvature."""
    ctx = _ctx(spec)
    Nsum = dim_sum(N1, N2)
    exact = ctx.exact(point, Nsum)
    lo, hi = sandwich_bounds(ctx, point, N1, N2)
    entries = [
        _entry("sandwich_lower", "lo", lo, "sandwich", Nsum, exact),
        _entry("sandwich_upper", "hi", hi, "sandwich", Nsum, exact),
    ]
    sat = saturation_upper_bound(ctx, point, N1, N2)
    if sat.bound is not None:
        entries.append(_entry(f"saturation_case_{sat.case}", "hi", sat.bound, "saturation", Nsum, exact))
    if sat.refinement is not None:
        entries.append(_entry("saturation_min_refinement", "hi", sat.refinement, "saturation", Nsum, exact))
    for name, val in sat.extra.items():
        entries.append(_entry(f"saturation_{name}", "hi", val, "saturation", Nsum, exact))
    for N in sorted({float(N1), float(N2)}):
        eN = ctx.exact(point, N)
        up, low = same_dimension_bounds(ctx, point, N)
        entries.append(_entry("same_dim_upper", "hi", up, "same_dimension", N, eN))
        entries.append(_entry("same_dim_lower", "lo", low, "same_dimension", N, eN))
        _, hiN = sandwich_bounds(ctx, point, N, N)
        entries.append(_entry("sandwich_upper_same_dim", "hi", hiN, "monotonicity", N, eN))
    conv = convexity_corollary_bounds(ctx, point, (N1, N2), K1, K2)
    if conv.max_bound is not None:
        entries.append(_entry("convexity_max", "hi", conv.max_bound, "convexity_warped", conv.max_dim, exact))
    if conv.min_bound is not None:
        entries.append(_entry("convexity_min", "hi", conv.min_bound, "convexity_geodesic", conv.min_dim, exact))
    return BoundReport(tuple(point), float(N1), float(N2), exact, entries, sat, conv, intersection_inequality(ctx.spec, point))


def product_points(spec) -> list[tuple[str, str]]:
    s = spec.spec if isinstance(spec, ProductContext) else spec
    return [(x, p) for x in s.G1.vertices for p in s.G2.vertices]
