"""Command line front end.

Exit codes: 0 success, 2 argument error, 3 capability error, 4 numeric
error, 5 a node-budget timeout is present in the output.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

from .clique import (DEFAULT_NODE_BUDGET, denoise, edge_clique_number,
                     max_clique)
from .errors import ArgumentError, CapabilityError, NumericError
from .geometry import Norm, unit_ball_volume
from .harness import GEOMETRIC_N_CAP, load_config, run_sweep
from .model import (GeometricGraph, Regime, RegimeParams, build_geometric_graph,
                    empty_base, long_edges, pair_index, perturb,
                    radius_for_regime, read_graph, sample_uniform_cube,
                    write_graph)
from .scan import ScanQuery, scan_exact, scan_point_centered
from .theory import (Model, PredictParams, VALID_CASES, predict_omega)
from .wscp import build_wscp, dump_wscp, verify_wscp

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_CAPABILITY = 3
EXIT_NUMERIC = 4
EXIT_TIMEOUT = 5


def _add_regime_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--regime", type=str.upper,
                    choices=[r.value for r in Regime],
                    help="derive the radius from a connectivity regime")
    sp.add_argument("--alpha", type=float, default=None,
                    help="subcritical decay exponent")
    sp.add_argument("--t", type=float, default=None,
                    help="supercritical density parameter")
    sp.add_argument("--sigma", type=float, default=1.0,
                    help="point density scale (default 1.0)")


def _regime_params(args) -> RegimeParams:
    return RegimeParams(regime=Regime(args.regime), alpha=args.alpha,
                        t=args.t, sigma=args.sigma)


def _resolve_radius(args, n: int, d: int) -> float:
    if args.r is not None and args.regime is not None:
        raise ArgumentError("give either --r or --regime, not both")
    if args.r is not None:
        if args.r < 0:
            raise ArgumentError(f"radius must be >= 0, got {args.r}")
        return float(args.r)
    if args.regime is None:
        raise ArgumentError("a radius is required: --r or --regime")
    return radius_for_regime(_regime_params(args), n, d)


def _load(path: str):
    g = read_graph(path)
    return g


def _base_of(g) -> GeometricGraph:
    return g if isinstance(g, GeometricGraph) else g.base


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args) -> int:
    if args.n > GEOMETRIC_N_CAP:
        raise ArgumentError(f"n = {args.n} exceeds the cap {GEOMETRIC_N_CAP}")
    cloud = sample_uniform_cube(args.n, args.d, args.seed)
    norm = Norm.parse(args.norm)
    r = _resolve_radius(args, args.n, args.d)
    g = empty_base(cloud, norm) if r == 0.0 else build_geometric_graph(cloud, r, norm)
    write_graph(args.out, g)
    print(f"wrote {args.out}: n={g.n} d={args.d} r={g.r:.17g} m={g.m}")
    return EXIT_OK


def _cmd_perturb(args) -> int:
    g = _load(args.input)
    if not isinstance(g, GeometricGraph):
        raise ArgumentError(f"{args.input} is already perturbed; "
                            "perturb expects a base graph")
    pg = perturb(g, args.p, args.q, args.seed)
    write_graph(args.out, pg)
    kept = pg.kept_u.shape[0]
    ins = pg.ins_u.shape[0]
    print(f"wrote {args.out}: n={pg.n} m={pg.m} kept={kept} "
          f"deleted={g.m - kept} inserted={ins}")
    return EXIT_OK


def _cmd_clique(args) -> int:
    g = _load(args.input)
    if args.edge is not None:
        u, v = args.edge
        try:
            k = edge_clique_number(g, u, v, node_budget=args.budget)
        except NumericError:
            print(f"edge=({u},{v}) status=TIMEOUT budget={args.budget}")
            return EXIT_TIMEOUT
        print(f"edge=({u},{v}) edge_omega={k}")
        return EXIT_OK
    res = max_clique(g, stop_at=args.stop_at, node_budget=args.budget)
    print(f"omega={res.size} exact={str(res.exact).lower()} nodes={res.nodes}")
    print("witness=" + ",".join(str(v) for v in res.witness))
    if res.budget_exhausted:
        print(f"status=TIMEOUT budget={args.budget}")
        return EXIT_TIMEOUT
    return EXIT_OK


def _cmd_scan(args) -> int:
    g = _load(args.input)
    base = _base_of(g)
    query = ScanQuery(cloud=base.cloud, norm=base.norm, radius=args.radius)
    res = scan_exact(query) if args.method == "exact" else scan_point_centered(query)
    center = ",".join("%.17g" % c for c in res.center_witness)
    print(f"value={res.value} method={res.method.value} center={center}")
    return EXIT_OK


def _cmd_wscp(args) -> int:
    g = _load(args.input)
    base = _base_of(g)
    fam = build_wscp(base)
    rep = verify_wscp(fam, base)
    print(f"size={rep.size} coverage={str(rep.coverage).lower()} "
          f"clique_radius={str(rep.clique_radius).lower()} "
          f"separation={str(rep.separation).lower()} "
          f"geometric_cliques={str(rep.geometric_cliques).lower()} "
          f"ok={str(rep.all_ok).lower()}")
    if not args.quiet:
        print(dump_wscp(fam))
    return EXIT_OK if rep.all_ok else EXIT_NUMERIC


def _fmt_bound(x: float) -> str:
    return "%.6g" % x


def _predict_rows(model: Model, cases: Sequence[str], pp: PredictParams,
                  strict: bool):
    rows = []
    for case in cases:
        try:
            ev = predict_omega(model, case, pp)
        except (ArgumentError, NumericError) as exc:
            if strict:
                raise
            rows.append((case, "n/a", "n/a", "n/a", f"out of domain: {exc}"))
            continue
        rows.append((case, ev.condition.value,
                     _fmt_bound(ev.lower) + " [" + ev.lower_form.value + "]",
                     _fmt_bound(ev.upper) + " [" + ev.upper_form.value + "]",
                     ev.provenance))
    return rows


def _cmd_predict(args) -> int:
    model = Model[args.model]
    r = _resolve_radius(args, args.n, args.d)
    norm = Norm.parse(args.norm)
    theta = unit_ball_volume(args.d, norm)
    pp = PredictParams(n=args.n, r=r, d=args.d, sigma=args.sigma,
                       theta=theta, p=args.p, q=args.q)
    cases = VALID_CASES[model] if args.case is None else (args.case,)
    rows = _predict_rows(model, cases, pp, strict=args.case is not None)
    header = ("case", "condition", "lower", "upper", "provenance")
    widths = [max(len(header[i]), max(len(row[i]) for row in rows))
              for i in range(4)]
    fmt = "  ".join("{:<%d}" % w for w in widths) + "  {}"
    print(f"model={model.name} n={pp.n} r={pp.r:.17g} d={pp.d} "
          f"sigma={pp.sigma} theta={theta:.6g} p={pp.p} q={pp.q}")
    print(fmt.format(*header))
    for row in rows:
        print(fmt.format(*row))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = load_config(args.config)
    if args.workers is not None:
        cfg = dataclasses.replace(cfg, workers=args.workers)
    result = run_sweep(cfg, out_path=args.out, svg_path=args.svg)
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    return EXIT_TIMEOUT if result.any_timeout else EXIT_OK


def _cmd_denoise(args) -> int:
    g = _load(args.input)
    regime = None
    if args.threshold.lower() == "auto":
        if args.regime is None:
            raise ArgumentError("--threshold auto needs --regime")
        regime = _regime_params(args)
        thr = "auto"
    else:
        thr = float(args.threshold)
    res = denoise(g, thr, regime, node_budget=args.budget)
    removed = int(res.removed_u.shape[0])
    print(f"threshold={res.threshold:.17g} removed={removed} "
          f"kept={res.graph.m} timeouts={res.timeouts}")
    if args.truth:
        base = _base_of(g)
        lu, lv = long_edges(g)
        n = base.cloud.n
        truth = set(pair_index(lu, lv, n).tolist())
        got = set(pair_index(res.removed_u, res.removed_v, n).tolist())
        tp = len(truth & got)
        precision = tp / removed if removed else 1.0
        recall = tp / len(truth) if truth else 1.0
        print(f"long_edges={len(truth)} precision={precision:.6g} "
              f"recall={recall:.6g}")
    if args.out is not None:
        write_graph(args.out, res.graph)
        print(f"wrote {args.out}")
    return EXIT_TIMEOUT if res.timeouts else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nrgg",
        description="Noisy random geometric graphs: generation, cliques, "
                    "scan statistics, partitions, predicted bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="sample a cloud and build its distance graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--norm", default="l2", help="l2 or linf")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--r", type=float, default=None,
                    help="connection radius; 0 gives an edgeless base")
    _add_regime_args(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("perturb", help="delete base edges w.p. p, insert non-edges w.p. q")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--p", type=float, default=0.0)
    sp.add_argument("--q", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_perturb)

    sp = sub.add_parser("clique", help="certified maximum clique, or one edge's clique number")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--edge", type=int, nargs=2, metavar=("U", "V"), default=None)
    sp.add_argument("--stop-at", type=int, default=None,
                    help="stop as soon as a clique of this size is found")
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    sp.set_defaults(func=_cmd_clique)

    sp = sub.add_parser("scan", help="max points in a ball of the given radius")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--method", choices=["exact", "centers"], default="exact",
                    help="exact over all center positions, or point-centered")
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("wscp", help="build and verify a well-separated clique partition family")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--quiet", action="store_true", help="suppress the per-clique dump")
    sp.set_defaults(func=_cmd_wscp)

    sp = sub.add_parser("predict", help="evaluate clique-number bounds at given parameters")
    sp.add_argument("--model", choices=[m.name for m in Model], required=True)
    sp.add_argument("--case", default=None,
                    help="theorem case tag; omit to tabulate all cases")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--norm", default="l2")
    sp.add_argument("--r", type=float, default=None)
    _add_regime_args(sp)
    sp.add_argument("--p", type=float, default=0.0)
    sp.add_argument("--q", type=float, default=0.0)
    sp.set_defaults(func=_cmd_predict)

    sp = sub.add_parser("experiment", help="run a sweep config, write CSV, print summary JSON")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--svg", default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=_cmd_experiment)

    sp = sub.add_parser("denoise", help="drop edges with small edge clique number")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--threshold", required=True, help="a number > 2, or 'auto'")
    _add_regime_args(sp)
    sp.add_argument("--truth", action="store_true",
                    help="score removals against the true long edges")
    sp.add_argument("--out", default=None, help="write the cleaned graph here")
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    sp.set_defaults(func=_cmd_denoise)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ArgumentError as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
