"""Statistical and property gates for the whole toolkit, at desk scale.

Every test prints exactly one PASS/FAIL line (visible with -s; on
failure the same line is the assertion message).  The sweep-based gates
load the shipped presets from configs/ so the command-line runs and the
gates see identical rows.  Two gates are multi-minute by construction
(dense deletion needs ~1.1e9 search nodes for its largest exact solve;
the denoising gate scores 30 full instances) and run last.
"""

import math
import random
from pathlib import Path

import numpy as np
from scipy.stats import binom, poisson

from nrgg import (Norm, build_geometric_graph, build_wscp, max_clique,
                  sample_uniform_cube, scan_exact, scan_point_centered,
                  unit_ball_volume, verify_wscp)
from nrgg.harness import load_config, ratio_fit, run_sweep
from nrgg.scan import ScanQuery
from nrgg.theory import (PredictParams, RegimeParams, Window,
                         binomial_tail_sandwich, chernoff_tail, m_w_bound,
                         phi_thermo)
from nrgg.model import Regime

from conftest import brute_omega, brute_rgg_pairs_blocked, random_edges

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _report(tag: str, ok: bool, detail: str) -> None:
    line = f"[{tag}] {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def _sweep(name: str):
    return run_sweep(load_config(CONFIGS / f"{name}.json"))


def test_clique_solver_matches_exhaustive_oracle():
    rng = random.Random(20260814)
    matches = 0
    for i in range(200):
        n = rng.randint(1, 18)
        density = (0.2, 0.5, 0.8)[i % 3]
        edges = random_edges(rng, n, density)
        adj = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        res = max_clique(adj)
        if res.exact and res.size == brute_omega(n, edges):
            matches += 1
    _report("clique-oracle", matches == 200, f"{matches}/200 exact matches")


def test_grid_builder_matches_all_pairs_bruteforce():
    rng = random.Random(77)
    norms = (Norm.L1, Norm.L2, Norm.LINF)
    good = 0
    for i in range(50):
        n = 2000 if i < 2 else rng.randint(2, 2000)
        d = rng.choice((1, 2, 3))
        norm = norms[i % 3]
        theta = unit_ball_volume(d, norm)
        deg = rng.uniform(0.5, 30.0)
        r = min(0.9, (deg / (theta * n)) ** (1.0 / d))
        cloud = sample_uniform_cube(n, d, seed=1000 + i)
        g = build_geometric_graph(cloud, r, norm)
        got = set(zip(g.edges_u.tolist(), g.edges_v.tolist()))
        if got == brute_rgg_pairs_blocked(cloud.points, r, norm):
            good += 1
    _report("rgg-bruteforce", good == 50, f"{good}/50 adjacency-identical")


def test_tail_sandwiches_and_chernoff_on_grid():
    points = bad = 0
    for mu in (0.5, 1.0, 2.0, 5.0, 10.0):
        for k in range(math.ceil(mu), 26):
            lo, hi = binomial_tail_sandwich(mu, k)
            ch = chernoff_tail(mu, k)
            tails = [poisson.sf(k - 1, mu)]
            tails += [binom.sf(k - 1, n, mu / n) for n in (30, 100, 1000)]
            for tail in tails:
                points += 1
                if not (lo <= tail <= hi and tail <= ch):
                    bad += 1
    _report("tail-sandwich", bad == 0,
            f"{points - bad}/{points} grid points inside sandwich and "
            f"below Chernoff")


def test_er_insertion_clique_floor():
    res = _sweep("er_clique_floor")
    over = sum(1 for row in res.rows
               if row.omega is not None and row.omega > 10)
    _report("er-clique-floor", over >= 95,
            f"omega > 10 in {over}/100 trials at n=1024, q=1/2")


def test_scan_point_centered_sandwiches_exact():
    rng = random.Random(5)
    good = 0
    for i in range(100):
        n = rng.randint(1, 500)
        d = rng.choice((1, 2))
        norm = (rng.choice((Norm.L1, Norm.L2, Norm.LINF)) if d == 1
                else rng.choice((Norm.L2, Norm.LINF)))
        s = rng.uniform(0.01, 0.25)
        cloud = sample_uniform_cube(n, d, seed=4000 + i)
        lo = scan_point_centered(ScanQuery(cloud, norm, s)).value
        ex = scan_exact(ScanQuery(cloud, norm, s)).value
        hi = scan_point_centered(ScanQuery(cloud, norm, 2.0 * s)).value
        if lo <= ex <= hi:
            good += 1
    _report("scan-sandwich", good == 100,
            f"point_centered(s) <= exact(s) <= point_centered(2s) on "
            f"{good}/100 instances")


def test_wscp_families_verify_and_stay_small():
    rng = random.Random(31)
    ok_verify = ok_nonadj = 0
    max_size = 0
    for i in range(100):
        n = rng.randint(2000, 5000) if i < 8 else rng.randint(20, 800)
        t = rng.uniform(2.0, 8.0)
        r = (t * math.log(n) / n) ** 0.5
        cloud = sample_uniform_cube(n, 2, seed=6000 + i)
        g = build_geometric_graph(cloud, r, Norm.L2)
        fam = build_wscp(g)
        max_size = max(max_size, fam.size)
        if verify_wscp(fam, g).all_ok and fam.size <= 64:
            ok_verify += 1
        crossing = 0
        for part in fam.parts:
            for a in range(len(part.cliques)):
                ma = part.cliques[a].members
                for b in range(a + 1, len(part.cliques)):
                    for u in ma:
                        for v in part.cliques[b].members:
                            if g.has_edge(int(u), int(v)):
                                crossing += 1
        if crossing == 0:
            ok_nonadj += 1
    _report("wscp-invariants", ok_verify == 100 and ok_nonadj == 100,
            f"verify all-true {ok_verify}/100, cross-clique non-adjacency "
            f"{ok_nonadj}/100, max family size {max_size} <= 64")


def test_occupancy_bounds_hold_with_high_probability():
    sub = _sweep("occupancy_subcritical")
    sub_ok = sum(1 for row in sub.rows
                 if row.mw3 is not None and row.mw3 <= 8)
    sup = _sweep("occupancy_supercritical")
    params = RegimeParams(regime=Regime.SUPERCRITICAL, t=2.0)
    sup_ok = 0
    for row in sup.rows:
        bound = m_w_bound(Window.W1, params, row.n, row.r, 2, math.pi)
        if row.mw1 is not None and row.mw1 <= bound:
            sup_ok += 1
    _report("occupancy", sub_ok >= 99 and sup_ok >= 99,
            f"subcritical M_W3 <= 8 on {sub_ok}/100 seeds, supercritical "
            f"M_W1 <= tau*2^d*theta*sigma*nr^d on {sup_ok}/100 seeds")


def test_sweep_rerun_is_deterministic(tmp_path):
    cfg = load_config(CONFIGS / "wscp_supercritical.json")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_sweep(cfg, out_path=a)
    run_sweep(cfg, out_path=b)

    def strip_wall(path):
        out = []
        for line in path.read_text(encoding="utf-8").strip().splitlines():
            cells = line.split(",")
            out.append(",".join(cells[:-1]))
        return out

    same = strip_wall(a) == strip_wall(b)
    _report("determinism", same,
            "two runs of a shipped config emit identical CSVs "
            "excluding wall_ms")


def test_insertion_supercritical_clique_scaling():
    res = _sweep("insertion_supercritical")
    rows = [row for row in res.rows if row.omega is not None]
    held = sum(1 for row in rows if row.omega >= row.lower_pred)
    fit = ratio_fit(rows, "volume")
    ok = held >= math.ceil(0.9 * len(rows)) and fit["spread"] <= 2.0
    _report("insertion-supercritical", ok,
            f"omega >= (eta/2)*sigma*nr^2 in {held}/{len(rows)} rows, "
            f"omega/nr^2 spread {fit['spread']:.3f} <= 2.0")


def test_insertion_thermodynamic_clique_floor():
    res = _sweep("insertion_thermodynamic")
    rows = [row for row in res.rows if row.omega is not None]
    held = 0
    for row in rows:
        floor_bound = math.floor(
            phi_thermo(PredictParams(n=row.n, r=row.r, d=2)))
        if row.omega >= floor_bound:
            held += 1
    ok = held >= math.ceil(0.9 * len(rows))
    _report("insertion-thermodynamic", ok,
            f"omega >= floor(ln n / (2 ln(ln n / nr^2))) in "
            f"{held}/{len(rows)} rows")


def test_deletion_coupling_and_dense_scaling():
    coup = _sweep("deletion_thermodynamic")
    pairs = [row for row in coup.rows
             if row.omega is not None and row.omega_base is not None]
    coupled = sum(1 for row in pairs if row.omega <= row.omega_base)

    dense = _sweep("deletion_supercritical")
    rows = [row for row in dense.rows if row.omega is not None]
    fit = ratio_fit(rows, "log_volume")
    held = 0
    for row in rows:
        vol = row.n * row.r ** 2
        bound = 3.0 * (math.log(vol) / math.log(1.0 / (1.0 - row.p))) * 1.5
        if row.omega <= bound:
            held += 1
    ok = (coupled == len(pairs) and len(pairs) > 0
          and fit["spread"] <= 2.5
          and held >= math.ceil(0.95 * len(rows))
          and not dense.any_timeout)
    _report("deletion-coupling-dense", ok,
            f"omega <= omega_base in {coupled}/{len(pairs)} deletion rows; "
            f"dense omega/ln(nr^2) spread {fit['spread']:.3f} <= 2.5, "
            f"omega <= 1.5*3*log_2(nr^2) in {held}/{len(rows)} rows")


def test_long_edge_denoising_precision_recall():
    res = _sweep("denoise_supercritical")
    rows = [row for row in res.rows if row.precision is not None]
    mean_p = sum(row.precision for row in rows) / len(rows)
    mean_r = sum(row.recall for row in rows) / len(rows)
    ok = mean_p >= 0.9 and mean_r >= 0.9
    _report("denoising", ok,
            f"mean precision {mean_p:.4f} (need >= 0.9), "
            f"mean recall {mean_r:.4f} (need >= 0.9) over {len(rows)} trials")
