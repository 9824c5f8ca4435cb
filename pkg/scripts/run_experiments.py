#!/usr/bin/env python3
"""Run the shipped sweep configs and collect CSVs, SVGs, and summaries.

Each config in configs/ is executed with the harness; results land in
--out-dir as <name>.csv, <name>.svg (when plotting succeeds), and
<name>.summary.json.  Re-running is idempotent: rows depend only on
(config, n, trial_index), so a second run rewrites identical CSVs
modulo the wall_ms column.
"""
import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from nrgg.harness import load_config, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--configs-dir", default=None,
                    help="directory with *.json sweep configs "
                         "(default: configs/ next to this script)")
    ap.add_argument("--out-dir", default=None,
                    help="where CSVs and summaries go (default: results/)")
    ap.add_argument("--only", default=None,
                    help="run only configs whose filename contains this")
    ap.add_argument("--skip-slow", action="store_true",
                    help="skip deletion_supercritical (the one long sweep)")
    ap.add_argument("--svg", action="store_true",
                    help="also write an omega-vs-n plot per sweep")
    args = ap.parse_args()

    root = Path(__file__).resolve().parent.parent
    cdir = Path(args.configs_dir) if args.configs_dir else root / "configs"
    odir = Path(args.out_dir) if args.out_dir else root / "results"
    odir.mkdir(parents=True, exist_ok=True)

    paths = sorted(cdir.glob("*.json"))
    if args.only:
        paths = [p for p in paths if args.only in p.name]
    if args.skip_slow:
        paths = [p for p in paths if p.stem != "deletion_supercritical"]
    if not paths:
        print("no configs matched", file=sys.stderr)
        return 2

    any_timeout = False
    for path in paths:
        cfg = load_config(path)
        name = path.stem
        print(f"== {name}: model={cfg.model.value} n={list(cfg.n_list)} "
              f"trials={cfg.trials}", flush=True)
        t0 = time.perf_counter()
        res = run_sweep(cfg,
                        out_path=odir / f"{name}.csv",
                        svg_path=(odir / f"{name}.svg") if args.svg else None)
        dt = time.perf_counter() - t0
        (odir / f"{name}.summary.json").write_text(
            json.dumps(res.summary, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        any_timeout |= res.any_timeout
        ratio = res.summary.get("ratio")
        line = f"   {len(res.rows)} rows in {dt:.1f}s"
        if ratio:
            line += f", spread={ratio['spread']:.3f} over {ratio['scaling']}"
        if res.any_timeout:
            line += ", TIMEOUTS PRESENT"
        print(line, flush=True)
    return 5 if any_timeout else 0


if __name__ == "__main__":
    sys.exit(main())
