#!/usr/bin/env python3
"""Precision/recall of long-edge removal as the cut threshold varies.

Builds one supercritical instance with inserted noise, then denoises it
at a range of fixed thresholds and at the auto threshold, scoring each
removal set against the true long edges (length > 3r).  Useful for
seeing where the precision ceiling sits: inserted edges of length in
(r, 3r] are thin in the same way long ones are, so they get removed at
any workable threshold but count as false positives.
"""
import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from nrgg import (Norm, Regime, RegimeParams, build_geometric_graph, denoise,
                  long_edges, perturb, radius_for_regime, sample_uniform_cube)
from nrgg.model import pair_index
from nrgg.theory import auto_denoise_threshold


def score(pg, removed_u, removed_v):
    n = pg.n
    lu, lv = long_edges(pg)
    truth = set(pair_index(lu, lv, n).tolist())
    got = set(pair_index(removed_u, removed_v, n).tolist())
    tp = len(truth & got)
    precision = tp / len(got) if got else 1.0
    recall = tp / len(truth) if truth else 1.0
    return precision, recall, len(truth), len(got)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--t", type=float, default=5.0)
    ap.add_argument("--q", type=float, default=None,
                    help="insertion rate (default n^-0.5)")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--thresholds", type=float, nargs="*", default=None,
                    help="explicit cut values (default: a spread around auto)")
    args = ap.parse_args()

    params = RegimeParams(regime=Regime.SUPERCRITICAL, t=args.t)
    r = radius_for_regime(params, args.n, 2)
    q = args.q if args.q is not None else args.n ** -0.5
    cloud = sample_uniform_cube(args.n, 2, args.seed)
    base = build_geometric_graph(cloud, r, Norm.L2)
    pg = perturb(base, 0.0, q, args.seed + 1)
    lu, _ = long_edges(pg)
    print(f"n={args.n} r={r:.5f} q={q:.5f} m={pg.m} "
          f"long={lu.shape[0]} inserted={pg.ins_u.shape[0]}")

    auto = auto_denoise_threshold(pg, params)
    cuts = args.thresholds
    if cuts is None:
        lo = max(2.5, math.floor(auto * 0.4))
        cuts = sorted({round(lo + i * (auto * 1.6 - lo) / 7, 2)
                       for i in range(8)} | {round(auto, 2)})
    print(f"auto threshold = {auto:.3f}")
    print(f"{'threshold':>10} {'removed':>8} {'precision':>10} {'recall':>8}")
    for thr in cuts:
        res = denoise(pg, float(thr))
        prec, rec, n_truth, n_got = score(pg, res.removed_u, res.removed_v)
        tag = "  <- auto" if abs(thr - auto) < 0.05 else ""
        print(f"{thr:>10.2f} {n_got:>8} {prec:>10.4f} {rec:>8.4f}{tag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
