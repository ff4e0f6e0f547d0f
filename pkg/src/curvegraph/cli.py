"""Command line interface: ``curvegraph <command> ...``.

Every command writes one JSON record per line to stdout. ``--csv PATH``
additionally writes the scalar fields of those records as a CSV table.

Exit codes: 0 success, 1 invariant failure, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import curvature as cv
from . import metrics as mt
from . import warped as wp
from .fileio import InputError, jsonable, load_graph, load_warp, save_graph
from .graph import GraphError, format_dim, parse_dim
from .verify import run_verify

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class NumericalFailure(RuntimeError):
    pass


def _dim(text: str) -> float:
    try:
        return parse_dim(text)
    except (ValueError, GraphError):
        raise argparse.ArgumentTypeError(f"invalid dimension {text!r}") from None


def _dims(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected N1,N2")
    return _dim(parts[0]), _dim(parts[1])


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get("CURVEGRAPH_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"CURVEGRAPH_WORKERS must be an integer, got {env!r}") from None
    return 1


def _pmap(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _finite(*values):
    for v in values:
        if isinstance(v, float) and math.isnan(v):
            raise NumericalFailure("computation produced NaN")


class Output:
    def __init__(self, stream, csv_path: str | None):
        self.stream = stream
        self.csv_path = csv_path
        self.rows: list[dict] = []

    def emit(self, record: dict):
        rec = jsonable(record)
        self.stream.write(json.dumps(rec, sort_keys=True) + "\n")
        self.rows.append(rec)

    def close(self):
        if not self.csv_path:
            return
        scalar = lambda v: not isinstance(v, (dict, list))
        cols = []
        for r in self.rows:
            for k, v in r.items():
                if scalar(v) and k not in cols:
                    cols.append(k)
        with open(self.csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore")
            w.writeheader()
            for r in self.rows:
                w.writerow({k: v for k, v in r.items() if scalar(v)})


# commands


def _curv_one(job):
    G, x, N = job
    res = cv.curvature_function(G, x, N)
    basis = [{v: float(f[G.idx(v)]) for v in G.vertices} for f in res.maximizer_basis]
    return {
        "record": "curvature",
        "vertex": x,
        "N": format_dim(N),
        "value": res.value,
        "saturation": res.saturation,
        "eigenspace_dim": res.margins["eigenspace_dim"],
        "eigen_gap": res.margins["eigen_gap"],
        "maximizer_basis": basis,
    }


def cmd_curv(args, out: Output) -> int:
    G = load_graph(args.graph)
    vertices = [args.vertex] if args.vertex else list(G.vertices)
    for v in vertices:
        G.idx(v)
    recs = _pmap(_curv_one, [(G, v, args.dim) for v in vertices], _workers(args))
    for r in sorted(recs, key=lambda r: r["vertex"]):
        _finite(r["value"])
        out.emit(r)
    return EXIT_OK


def _bounds_one(job):
    G, x, N = job
    K = cv.curvature_value(G, x, N)
    Kinf = cv.curvature_value(G, x, math.inf)
    lower = cv.structural_lower_bound(G, x, N)
    up_s = cv.structural_upper_bound(G, x, "as_stated")
    up_c = cv.structural_upper_bound(G, x, "corrected")
    return {
        "record": "structural_bounds",
        "vertex": x,
        "N": format_dim(N),
        "exact": K,
        "exact_inf": Kinf,
        "lower": lower,
        "lower_holds": lower <= K + 1e-9,
        "upper_as_stated": up_s,
        "upper_as_stated_holds": Kinf <= up_s + 1e-9,
        "upper_corrected": up_c,
        "upper_corrected_holds": Kinf <= up_c + 1e-9,
        "delta_quotient": cv.delta_quotient(G, x),
    }


def cmd_bounds(args, out: Output) -> int:
    G = load_graph(args.graph)
    recs = _pmap(_bounds_one, [(G, v, args.dim) for v in G.vertices], _workers(args))
    for r in sorted(recs, key=lambda r: r["vertex"]):
        out.emit(r)
    return EXIT_OK


def cmd_product(args, out: Output) -> int:
    spec = load_warp(args.warpfile)
    P = wp.doubly_warped_product(spec)
    save_graph(P, args.output)
    out.emit({"record": "product", "path": args.output, "vertices": P.n, "directed_edges": int(np.count_nonzero(P.weights))})
    return EXIT_OK


def _report_one(job):
    spec, point, N1, N2, K1, K2 = job
    ctx = wp.ProductContext(spec)
    rep = wp.bound_report(ctx, point, N1, N2, K1, K2)
    lhs, rhs = wp.intersection_margin(spec, point)
    return {
        "record": "bound_report",
        "vertex": wp.product_vertex_id(*point),
        "N1": format_dim(N1),
        "N2": format_dim(N2),
        "exact": rep.exact,
        "entries": [
            {
                "kind": e.kind,
                "side": e.side,
                "value": e.value,
                "source": e.source,
                "N": format_dim(e.dim),
                "exact": e.exact,
                "holds": e.holds,
            }
            for e in rep.entries
        ],
        "violations": len(rep.violations),
        "saturation_case": rep.saturation.case,
        "saturation_classes": list(rep.saturation.classes),
        "convexity_predicates": rep.convexity.predicates,
        "intersection_inequality": rep.intersection,
        "intersection_lhs": lhs,
        "intersection_rhs": rhs,
    }


def cmd_report(args, out: Output) -> int:
    spec = wp._require_warped(load_warp(args.warpfile))
    N1, N2 = args.dims
    dil = wp.dilation_numbers(spec)
    out.emit(
        {
            "record": "spec",
            "N1": format_dim(N1),
            "N2": format_dim(N2),
            "dil_alpha2": dil.alpha,
            "dil_beta2": dil.beta,
            "dil_alpha2_beta2": dil.alpha_beta,
            "dil_beta2_alpha2": dil.beta_alpha,
        }
    )
    jobs = [(spec, pt, N1, N2, args.K1, args.K2) for pt in wp.product_points(spec)]
    recs = _pmap(_report_one, jobs, _workers(args))
    for r in sorted(recs, key=lambda r: r["vertex"]):
        _finite(r["exact"])
        out.emit(r)
    return EXIT_OK


def cmd_rigidity(args, out: Output) -> int:
    spec = wp._require_warped(load_warp(args.warpfile))
    ctx = wp.ProductContext(spec)
    good, witnesses = wp.good_warping_pair_check(ctx, args.dim)
    v = wp.rigidity_check(ctx, args.dim, args.tol)
    out.emit(
        {
            "record": "rigidity",
            "N": format_dim(args.dim),
            "good_pair": good,
            "witnesses": [w.__dict__ for w in witnesses],
            "equality_on_extrema": v.equality_holds,
            "alpha_constant": v.alpha_constant,
            "beta_constant": v.beta_constant,
            "einstein_G1": v.einstein_G1,
            "einstein_G2": v.einstein_G2,
            "curvature_ratio": v.curvature_ratio,
            "warp_ratio": v.warp_ratio,
            "ratio_matches": v.ratio_matches,
            "contradiction": v.contradiction,
            "points": [
                {"vertex": wp.product_vertex_id(x, p), "exact": e, "sandwich_min": lo, "equal": same}
                for x, p, e, lo, same in v.points
            ],
        }
    )
    return EXIT_OK


def cmd_metric(args, out: Output) -> int:
    G = load_graph(args.graph)
    if args.pairs == "all":
        pairs = [(x, y) for i, x in enumerate(G.vertices) for y in G.vertices[i + 1 :]]
    else:
        parts = args.pairs.split(",")
        if len(parts) != 2:
            raise InputError("--pairs must be 'all' or 'x,y'")
        pairs = [(parts[0], parts[1])]
    for x, y in pairs:
        if args.kind == "path":
            r = mt.weighted_path_distance(G, x, y, args.length_mode)
        elif args.kind == "degree-path":
            r = mt.degree_path_metric(G, x, y)
        else:
            r = mt.resistance_metric(G, x, y)
        _finite(r.value)
        rec = {"record": "metric", "kind": r.kind, "x": x, "y": y, "value": r.value}
        if r.path is not None:
            rec["path"] = r.path
        out.emit(rec)
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    results = run_verify(args.seed, args.trials, _workers(args))
    hard_fail = claim_fail = 0
    for r in results:
        out.emit(
            {
                "record": "check",
                "name": r.name,
                "kind": "hard" if r.hard else "claim",
                "checked": r.checked,
                "failures": r.failures,
                "worst": r.worst,
                "witness": r.witness,
            }
        )
        if r.failures:
            if r.hard:
                hard_fail += 1
            else:
                claim_fail += 1
    out.emit(
        {
            "record": "summary",
            "seed": args.seed,
            "trials": args.trials,
            "hard_failures": hard_fail,
            "claims_violated": claim_fail,
            "strict": args.strict,
        }
    )
    if hard_fail or (args.strict and claim_fail):
        return EXIT_INVARIANT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvegraph", description="Bakry-Emery curvature of weighted graphs and warped products.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: $CURVEGRAPH_WORKERS or 1)")
    common.add_argument("--csv", default=None, metavar="PATH", help="also write scalar fields as CSV")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("curv", parents=[common], help="curvature function per vertex")
    s.add_argument("graph")
    s.add_argument("--vertex", default=None)
    s.add_argument("--dim", type=_dim, default=math.inf)
    s.set_defaults(func=cmd_curv)

    s = sub.add_parser("bounds", parents=[common], help="structural lower/upper bounds against exact curvature")
    s.add_argument("graph")
    s.add_argument("--dim", type=_dim, default=2.0)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("product", parents=[common], help="build and save a doubly warped product")
    s.add_argument("warpfile")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("report", parents=[common], help="all product bounds per product vertex")
    s.add_argument("warpfile")
    s.add_argument("--dims", type=_dims, required=True)
    s.add_argument("--K1", type=float, default=0.0, help="K1 for the convexity predicates")
    s.add_argument("--K2", type=float, default=0.0, help="K2 for the convexity predicates")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("rigidity", parents=[common], help="good warping pair check and rigidity verdict")
    s.add_argument("warpfile")
    s.add_argument("--dim", type=_dim, required=True)
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_rigidity)

    s = sub.add_parser("metric", parents=[common], help="path, degree path or resistance distances")
    s.add_argument("graph")
    s.add_argument("--kind", choices=["path", "degree-path", "resistance"], default="path")
    s.add_argument("--pairs", default="all")
    s.add_argument("--length-mode", choices=list(mt.LENGTH_MODES), default="weight")
    s.set_defaults(func=cmd_metric)

    s = sub.add_parser("verify", parents=[common], help="seeded invariant sweep")
    s.add_argument("seed", type=int)
    s.add_argument("trials", type=int)
    s.add_argument("--strict", action="store_true", help="also fail when a published claim is violated")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(sys.stdout, args.csv)
    try:
        code = args.func(args, out)
        out.close()
        return code
    except (InputError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
