"""Seeded invariant sweep behind ``curvegraph verify``.

Checks come in two kinds. Hard checks are identities or provable
inequalities; any failure there means a bug and fails the run. Claim checks
test published bounds that are not guaranteed to hold; their violations are
counted and reported with a witness but never fail the run unless
``strict`` is requested.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import curvature as cv
from . import metrics as mt
from . import warped as wp
from .corpus import complete_graph, cycle_graph, path_graph, random_graph, random_tree
from .graph import (
    WeightedGraph,
    degrees,
    gamma_all,
    gamma2_all,
    inv_dim,
    laplacian_all,
    scale_weights,
    spheres,
)

DIMS = (0.5, 1.0, 2.0, 5.0, math.inf)
ORACLE_SAMPLES = 2000

# name -> hard?
CHECKS: dict[str, bool] = {
    "translation_invariance": True,
    "symmetry_bilinearity": True,
    "gamma_nonnegative": True,
    "divergence_theorem": True,
    "locality": True,
    "estimate_laplacian_gamma": True,
    "estimate_cauchy_schwarz": True,
    "estimate_mixed_proof_constant": True,
    "estimate_mixed_stated_constant": False,
    "monotone_in_dimension": True,
    "scaling": True,
    "cd_bracketing": True,
    "maximizer_attains": True,
    "random_oracle": True,
    "saturation_soundness": True,
    "delta_test_function": True,
    "structural_lower_small_dim": True,
    "structural_lower_large_dim": False,
    "structural_upper_as_stated": False,
    "structural_upper_corrected": False,
    "product_measure_degree": True,
    "operator_splitting": True,
    "gamma2_first_formulation": True,
    "gamma2_tensor_formulation": True,
    "q_form_identity": True,
    "q_form_bound": True,
    "twisted_matches_warped": True,
    "same_dimension_upper": True,
    "saturation_cases_1_to_3": True,
    "saturation_neither_strong": False,
    "sandwich_lower": False,
    "sandwich_upper": False,
    "same_dimension_lower": False,
    "convexity_max_bound": False,
    "convexity_min_bound": False,
    "rigidity_contradiction": False,
    "dijkstra_vs_floyd_warshall": True,
    "metric_axioms": True,
    "dirichlet_residual": True,
    "degree_path_intrinsic": True,
    "resistance_series_law": True,
    "product_resistance": False,
    "totally_geodesic_weight_mode": False,
    "totally_geodesic_inverse_sqrt_mode": False,
}


@dataclass
class CheckResult:
    name: str
    hard: bool
    checked: int = 0
    failures: int = 0
    worst: float = 0.0
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class _Tally:
    results: dict[str, CheckResult] = field(default_factory=dict)

    def record(self, name: str, ok: bool, excess: float = 0.0, **witness):
        r = self.results.setdefault(name, CheckResult(name, CHECKS[name]))
        r.checked += 1
        if not ok:
            r.failures += 1
            if r.witness is None or excess > r.worst:
                r.worst = float(excess)
                r.witness = witness

    def merge(self, other: "_Tally"):
        for name, o in other.results.items():
            r = self.results.setdefault(name, CheckResult(name, o.hard))
            r.checked += o.checked
            r.failures += o.failures
            if o.witness is not None and (r.witness is None or o.worst > r.worst):
                r.worst, r.witness = o.worst, o.witness


def floyd_warshall(L: np.ndarray) -> np.ndarray:
    D = L.copy()
    np.fill_diagonal(D, 0.0)
    for k in range(D.shape[0]):
        D = np.minimum(D, D[:, k : k + 1] + D[k : k + 1, :])
    return D


def _graph_checks(t: _Tally, G: WeightedGraph, H: WeightedGraph, rng, tag: str):
    n = G.n
    f, g, h = rng.normal(size=(3, n))
    a, b, c = rng.normal(size=3)
    for x in G.vertices:
        i = G.idx(x)
        t.record(
            "translation_invariance",
            max(
                abs(laplacian_all(G, f + c)[i] - laplacian_all(G, f)[i]),
                abs(gamma_all(G, f + c, g)[i] - gamma_all(G, f, g)[i]),
                abs(gamma2_all(G, f + c, f + c)[i] - gamma2_all(G, f, f)[i]),
            )
            <= 1e-10,
            graph=tag,
            vertex=x,
        )
        sym = max(
            abs(gamma_all(G, f, g)[i] - gamma_all(G, g, f)[i]),
            abs(gamma2_all(G, f, g)[i] - gamma2_all(G, g, f)[i]),
            abs(gamma_all(G, a * f + b * g, h)[i] - a * gamma_all(G, f, h)[i] - b * gamma_all(G, g, h)[i]),
            abs(gamma2_all(G, a * f + b * g, h)[i] - a * gamma2_all(G, f, h)[i] - b * gamma2_all(G, g, h)[i]),
        )
        t.record("symmetry_bilinearity", sym <= 1e-9, sym, graph=tag, vertex=x)
        t.record("gamma_nonnegative", gamma_all(G, f, f)[i] >= -1e-14, graph=tag, vertex=x)
        # locality: perturbing f outside the 2-ball leaves Gamma_2(f)(x) alone
        s1, s2 = spheres(G, x)
        outside = np.ones(n, dtype=bool)
        outside[[i, *s1, *s2]] = False
        f2 = f + outside * rng.normal(size=n)
        t.record("locality", abs(gamma2_all(G, f2, f2)[i] - gamma2_all(G, f, f)[i]) <= 1e-10, graph=tag, vertex=x)

    D = degrees(G)
    L, Gf, Gg = laplacian_all(G, f), gamma_all(G, f, f), gamma_all(G, g, g)
    Gfg = gamma_all(G, f, g)
    for i in range(n):
        t.record("estimate_laplacian_gamma", L[i] ** 2 <= 2 * D[i] * Gf[i] + 1e-10, L[i] ** 2 - 2 * D[i] * Gf[i], graph=tag)
        t.record("estimate_cauchy_schwarz", Gfg[i] ** 2 <= Gf[i] * Gg[i] + 1e-10, graph=tag)
    if G.is_symmetric:
        div = float(np.sum(G.measure * L))
        t.record("divergence_theorem", abs(div) <= 1e-9, abs(div), graph=tag)

    # mixed estimate across two graphs
    u, v = rng.normal(size=(2, H.n))
    LG = laplacian_all(G, f)
    Gu, Gv, Guv = gamma_all(H, u, u), gamma_all(H, v, v), gamma_all(H, u, v)
    for i in range(n):
        for j in range(H.n):
            lhs = abs(LG[i] * Guv[j])
            t.record("estimate_mixed_proof_constant", lhs <= D[i] * Gf[i] + 0.5 * Gu[j] * Gv[j] + 1e-10, graph=tag)
            stated = 0.5 * D[i] * Gf[i] + 0.5 * Gu[j] * Gv[j]
            t.record("estimate_mixed_stated_constant", lhs <= stated + 1e-10, lhs - stated, graph=tag)


def _curvature_checks(t: _Tally, G: WeightedGraph, rng, tag: str):
    F = rng.normal(size=(G.n, ORACLE_SAMPLES))
    G2F = gamma2_all(G, F, F)
    GF = gamma_all(G, F, F)
    LF = laplacian_all(G, F)
    for x in G.vertices:
        i = G.idx(x)
        vals = {}
        for N in DIMS:
            res = cv.curvature_function(G, x, N)
            K = res.value
            vals[N] = K
            for lam in (0.5, 3.0):
                Ks = cv.curvature_value(scale_weights(G, lam), x, N)
                t.record("scaling", abs(Ks - lam * K) <= 1e-9 * max(1, abs(K)), abs(Ks - lam * K), graph=tag, vertex=x, N=N)
            ok = cv.cd_check(G, x, K - 1e-6, N) and not cv.cd_check(G, x, K + 1e-6, N)
            t.record("cd_bracketing", ok, graph=tag, vertex=x, N=N)
            worst = max(abs(cv.test_function_bound(G, x, N, f) - K) for f in res.maximizer_basis)
            t.record("maximizer_attains", worst <= 1e-8 * max(1, abs(K)), worst, graph=tag, vertex=x, N=N)
            mask = GF[i] > 1e-12
            q = (G2F[i, mask] - inv_dim(N) * LF[i, mask] ** 2) / GF[i, mask]
            t.record("random_oracle", q.min() >= K - 1e-6, K - q.min(), graph=tag, vertex=x, N=N)
            if res.saturation == cv.STRONG:
                lap = max(abs(laplacian_all(G, f)[i]) for f in res.maximizer_basis)
                t.record("saturation_soundness", lap <= 1e-9, lap, graph=tag, vertex=x, N=N)
            elif res.saturation == cv.UNSATURATED:
                least = res.margins["min_abs_laplacian"]
                t.record("saturation_soundness", least > 1e-6, graph=tag, vertex=x, N=N)
            lower = cv.structural_lower_bound(G, x, N)
            name = "structural_lower_small_dim" if N < 2 else "structural_lower_large_dim"
            t.record(name, lower <= K + 1e-9, lower - K, graph=tag, vertex=x, N=N)
        seq = [vals[N] for N in DIMS]
        t.record("monotone_in_dimension", all(a <= b + 1e-9 for a, b in zip(seq, seq[1:])), graph=tag, vertex=x)
        Kinf = vals[math.inf]
        dq = cv.delta_quotient(G, x)
        t.record("delta_test_function", Kinf <= dq + 1e-9, Kinf - dq, graph=tag, vertex=x)
        for variant in ("as_stated", "corrected"):
            ub = cv.structural_upper_bound(G, x, variant)
            t.record(f"structural_upper_{variant}", Kinf <= ub + 1e-9, Kinf - ub, graph=tag, vertex=x)


def _structured_factor(rng, prefix: str) -> WeightedGraph:
    kind = int(rng.integers(4))
    if kind == 0:
        return random_graph(int(rng.integers(2, 5)), 0.6, seed=int(rng.integers(2**31)), prefix=prefix)
    if kind == 1:
        return path_graph(int(rng.integers(2, 5)), prefix=prefix)
    if kind == 2:
        return cycle_graph(int(rng.integers(3, 6)), prefix=prefix)
    return complete_graph(int(rng.integers(2, 5)), prefix=prefix)


def _warp(rng, n: int) -> np.ndarray:
    if rng.random() < 0.3:
        return np.full(n, rng.uniform(0.5, 2.0))
    return rng.uniform(0.5, 2.0, size=n)


def _product_checks(t: _Tally, rng, tag: str):
    G1 = _structured_factor(rng, "x")
    G2 = _structured_factor(rng, "p")
    spec = wp.WarpedProductSpec(G1, G2, _warp(rng, G2.n), _warp(rng, G1.n))
    ctx = wp.ProductContext(spec)
    P = ctx.product
    n1, n2 = G1.n, G2.n
    D = degrees(P).reshape(n1, n2)
    exp = spec.alpha[None, :] ** -2 * degrees(G1)[:, None] + spec.beta[:, None] ** -2 * degrees(G2)[None, :]
    ok = np.allclose(P.measure, np.outer(G1.measure, G2.measure).reshape(-1), rtol=0, atol=1e-14) and np.allclose(D, exp, atol=1e-12)
    t.record("product_measure_degree", bool(ok), graph=tag)

    tw = wp.TwistedProductSpec(G1, G2, np.tile(spec.alpha, (n1, 1)), np.tile(spec.beta[:, None], (1, n2)))
    t.record("twisted_matches_warped", wp.doubly_warped_product(tw) == P, graph=tag)

    N1, N2 = (float(v) for v in rng.choice([1.0, 2.0, 5.0, math.inf], size=2))
    for pt in wp.product_points(spec):
        u, v = rng.normal(size=(2, n1 * n2))
        r1, r2 = wp.check_operator_splitting(spec, u, v, pt, P)
        t.record("operator_splitting", max(r1, r2) <= 1e-12, max(r1, r2), graph=tag, point=pt)
        res = wp.gamma2_first_formulation(spec, u, v, pt, P).residual
        t.record("gamma2_first_formulation", res <= 1e-10, res, graph=tag, point=pt)
        u1, v1 = rng.normal(size=(2, n1))
        u2, v2 = rng.normal(size=(2, n2))
        res = wp.gamma2_tensor_formulation(spec, u1, u2, pt, v1, v2, P).residual
        t.record("gamma2_tensor_formulation", res <= 1e-10, res, graph=tag, point=pt)

        ix, ip = G1.idx(pt[0]), G2.idx(pt[1])
        c1, c2 = rng.normal(size=2)
        U = wp.lift_sum(c1 * u1, c2 * u2)
        direct = gamma2_all(P, U, U)[ix * n2 + ip]
        pred = (
            c1**2 * spec.alpha[ip] ** -4 * gamma2_all(G1, u1, u1)[ix]
            + c2**2 * spec.beta[ix] ** -4 * gamma2_all(G2, u2, u2)[ip]
            + wp.q_form(spec, c1, c2, u1, u2, pt)
        )
        t.record("q_form_identity", abs(direct - pred) <= 1e-10, abs(direct - pred), graph=tag, point=pt)
        Q = wp.q_form(spec, c1, c2, u1, u2, pt)
        Q1, Q2 = wp.q1_q2_bounds(spec, pt, c1, c2, (True, True))
        rhs = Q1 * gamma_all(G1, u1, u1)[ix] + Q2 * gamma_all(G2, u2, u2)[ip]
        t.record("q_form_bound", Q <= rhs + 1e-10, Q - rhs, graph=tag, point=pt)

        Nsum = N1 + N2
        exact = ctx.exact(pt, Nsum)
        lo, hi = wp.sandwich_bounds(ctx, pt, N1, N2)
        wit = dict(graph=tag, point=pt, N1=N1, N2=N2, exact=exact)
        t.record("sandwich_lower", exact >= lo - 1e-8, lo - exact, bound=lo, **wit)
        t.record("sandwich_upper", exact <= hi + 1e-8, exact - hi, bound=hi, **wit)
        sat = wp.saturation_upper_bound(ctx, pt, N1, N2)
        if sat.case in (1, 2, 3):
            t.record("saturation_cases_1_to_3", exact <= sat.bound + 1e-8, exact - sat.bound, case=sat.case, **wit)
            if sat.refinement is not None:
                t.record("saturation_cases_1_to_3", exact <= sat.refinement + 1e-8, exact - sat.refinement, case="min", **wit)
        if sat.case == 4:
            t.record("saturation_neither_strong", exact <= sat.bound + 1e-8, exact - sat.bound, **wit)
        for val in sat.extra.values():
            t.record("saturation_neither_strong", exact <= val + 1e-8, exact - val, **wit)
        for N in (N1, N2):
            eN = ctx.exact(pt, N)
            up, low = wp.same_dimension_bounds(ctx, pt, N)
            t.record("same_dimension_upper", eN <= up + 1e-8, eN - up, graph=tag, point=pt, N=N)
            t.record("same_dimension_lower", eN >= low - 1e-8, low - eN, graph=tag, point=pt, N=N, exact=eN)
        conv = wp.convexity_corollary_bounds(ctx, pt, (N1, N2), 0.0, 0.0)
        if conv.max_bound is not None:
            t.record("convexity_max_bound", exact <= conv.max_bound + 1e-8, exact - conv.max_bound, **wit)
        if conv.min_bound is not None:
            eN = ctx.exact(pt, conv.min_dim)
            t.record("convexity_min_bound", eN <= conv.min_bound + 1e-8, eN - conv.min_bound, graph=tag, point=pt)
    verdict = wp.rigidity_check(ctx, N1)
    t.record("rigidity_contradiction", not verdict.contradiction, graph=tag, N=N1)


def _metric_checks(t: _Tally, rng, tag: str):
    G = random_graph(int(rng.integers(3, 9)), 0.5, measure_range=(1.0, 1.0), seed=int(rng.integers(2**31)))
    for mode in ("weight", "inverse_sqrt_weight", "degree"):
        L = mt.edge_lengths(G, mode)
        dj = mt.distance_table(G, mode)
        fw = floyd_warshall(L)
        err = float(np.abs(dj - fw).max())
        t.record("dijkstra_vs_floyd_warshall", err <= 1e-12, err, graph=tag, mode=mode)
    for kind in ("path", "degree-path", "resistance"):
        R = mt.metric_table(G, kind)
        n = G.n
        off = ~np.eye(n, dtype=bool)
        ok = (
            np.allclose(R, R.T, atol=1e-10)
            and np.all(np.diag(R) == 0)
            and np.all(R[off] > 0)
            and not np.any(R[:, None, :] > R[:, :, None] + R[None, :, :] + 1e-10)
        )
        t.record("metric_axioms", bool(ok), graph=tag, kind=kind)
        if kind == "degree-path":
            t.record("degree_path_intrinsic", mt.intrinsic_metric_check(G, R), graph=tag)
    x, y = G.vertices[0], G.vertices[-1]
    sol = mt.dirichlet_solve(G, x, y)
    t.record("dirichlet_residual", sol.residual <= 1e-10, sol.residual, graph=tag)

    T = random_tree(int(rng.integers(3, 9)), seed=int(rng.integers(2**31)))
    # pick a path a - b - c with b separating a from c
    order = list(T.vertices)
    a, c = order[-1], order[0]
    path = mt.weighted_path_distance(T, a, c).path
    if len(path) >= 3:
        b = path[len(path) // 2]
        r = lambda u, v: mt.resistance_metric(T, u, v).value
        gap = abs(r(a, c) ** 2 - r(a, b) ** 2 - r(b, c) ** 2)
        t.record("resistance_series_law", gap <= 1e-9, gap, graph=tag)

    G1 = random_graph(int(rng.integers(2, 5)), 0.6, measure_range=(1.0, 1.0), seed=int(rng.integers(2**31)), prefix="x")
    G2 = random_graph(int(rng.integers(1, 4)), 0.6, measure_range=(1.0, 1.0), seed=int(rng.integers(2**31)), prefix="p")
    spec = wp.WarpedProductSpec(G1, G2, _warp(rng, G2.n), _warp(rng, G1.n))
    p = G2.vertices[0]
    ex = mt.product_resistance_experiment(spec, G1.vertices[0], G1.vertices[-1], p)
    t.record("product_resistance", ex.relative_deviation <= 1e-9, ex.relative_deviation, graph=tag)
    pmax = G2.vertices[int(np.argmax(spec.alpha))]
    rep = mt.totally_geodesic_check(spec, list(G1.vertices), list(G2.vertices), pmax)
    if rep.hypothesis:
        t.record("totally_geodesic_weight_mode", rep.agreement["weight"], rep.max_deviation["weight"], graph=tag)
        t.record(
            "totally_geodesic_inverse_sqrt_mode",
            rep.agreement["inverse_sqrt_weight"],
            rep.max_deviation["inverse_sqrt_weight"],
            graph=tag,
        )


def run_trial(seed: int, trial: int) -> _Tally:
    rng = np.random.default_rng([seed, trial])
    t = _Tally()
    tag = f"seed={seed},trial={trial}"
    n = int(rng.integers(2, 9))
    G = random_graph(n, 0.5, seed=int(rng.integers(2**31)), symmetric=bool(trial % 2 == 0))
    H = random_graph(int(rng.integers(2, 6)), 0.5, seed=int(rng.integers(2**31)))
    _graph_checks(t, G, H, rng, tag)
    _curvature_checks(t, G, rng, tag)
    _product_checks(t, rng, tag)
    _metric_checks(t, rng, tag)
    return t


def _run(args):
    return run_trial(*args)


def run_verify(seed: int, trials: int, workers: int = 1, progress: Callable[[int], None] | None = None) -> list[CheckResult]:
    total = _Tally()
    jobs = [(seed, k) for k in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run, jobs))
    else:
        parts = [_run(j) for j in jobs]
    for k, part in enumerate(parts):
        total.merge(part)
        if progress:
            progress(k)
    return [total.results.get(name, CheckResult(name, hard)) for name, hard in CHECKS.items()]
