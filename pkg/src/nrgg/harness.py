"""Monte-Carlo experiment runner: seeded trials, fixed-format CSV, summaries.

Every trial derives its randomness from mix(master_seed, n, trial_index),
so rows are reproducible bit-for-bit no matter how execution is scheduled.
The CSV column set is fixed; unmeasured quantities stay empty, a clique
search that exhausts its node budget writes TIMEOUT into the affected
cell, and wall_ms is the only column allowed to differ between runs.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .clique import DEFAULT_NODE_BUDGET, denoise, max_clique, \
    max_edge_clique_number
from .errors import ArgumentError, NumericError
from .geometry import Norm, unit_ball_volume
from .model import Regime, RegimeParams, build_geometric_graph, empty_base, \
    long_edges, pair_index, perturb, radius_for_regime, sample_uniform_cube
from .rng import combine
from .scan import ScanQuery, scan_point_centered
from .theory import Model, PredictParams, er_clique_lower, predict_omega
from .wscp import build_wscp

ER_N_CAP = 4096
GEOMETRIC_N_CAP = 1 << 16

CSV_COLUMNS = ("n", "r", "p", "q", "seed", "omega", "omega_base", "mw1",
               "mw3", "mwhalf", "long_edges", "precision", "recall",
               "lower_pred", "upper_pred", "wall_ms")
CSV_HEADER = ",".join(CSV_COLUMNS)


class ConfigModel(Enum):
    INSERTION_ONLY = "INSERTION_ONLY"
    DELETION_ONLY = "DELETION_ONLY"
    COMBINED = "COMBINED"
    ER_ONLY = "ER_ONLY"


class Measure(Enum):
    OMEGA = "OMEGA"
    EDGE_OMEGA_LONG = "EDGE_OMEGA_LONG"
    M_W1 = "M_W1"
    M_W3 = "M_W3"
    M_W_HALF = "M_W_HALF"
    WSCP_SIZE = "WSCP_SIZE"
    DENOISE_PR = "DENOISE_PR"


_THEORY_MODEL = {
    ConfigModel.INSERTION_ONLY: Model.INSERTION_ONLY,
    ConfigModel.DELETION_ONLY: Model.DELETION_ONLY,
    ConfigModel.COMBINED: Model.COMBINED,
}


def _parse_q_rule(rule: str) -> Tuple[str, float]:
    if rule.startswith("const:"):
        return "const", float(rule[len("const:"):])
    if rule.startswith("pow:n^"):
        return "pow", float(rule[len("pow:n^"):])
    if rule.startswith("scaled:(nr^d/logn)^"):
        return "scaled", float(rule[len("scaled:(nr^d/logn)^"):])
    raise ArgumentError(
        f"unknown q_rule {rule!r}; expected const:<x>, pow:n^<y>, "
        "or scaled:(nr^d/logn)^<c>")


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a model, a regime case, sizes, and what to measure."""

    model: ConfigModel
    n_list: Tuple[int, ...]
    d: int
    norm: Norm
    p: float
    q_rule: str
    trials: int
    master_seed: int
    measures: Tuple[Measure, ...]
    regime: Optional[Regime] = None
    case: Optional[str] = None
    alpha: Optional[float] = None
    t: Optional[float] = None
    sigma: float = 1.0
    node_budget: int = DEFAULT_NODE_BUDGET
    stop_at: Optional[int] = None
    measure_omega_base: Optional[bool] = None
    witness: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.n_list:
            raise ArgumentError("n_list must be nonempty")
        if list(self.n_list) != sorted(set(self.n_list)):
            raise ArgumentError("n_list must be strictly ascending")
        if self.trials < 1:
            raise ArgumentError("trials must be >= 1")
        cap = ER_N_CAP if self.model is ConfigModel.ER_ONLY else GEOMETRIC_N_CAP
        if max(self.n_list) > cap:
            raise ArgumentError(
                f"{self.model.value} sweeps are capped at n <= {cap}")
        if self.model is not ConfigModel.ER_ONLY and self.regime is None:
            raise ArgumentError("geometric sweeps need a regime")
        _parse_q_rule(self.q_rule)

    @property
    def wants_omega_base(self) -> bool:
        if self.measure_omega_base is not None:
            return self.measure_omega_base
        return self.model in (ConfigModel.DELETION_ONLY, ConfigModel.COMBINED)

    def regime_params(self) -> RegimeParams:
        return RegimeParams(regime=self.regime, alpha=self.alpha, t=self.t,
                            sigma=self.sigma)

    def q_of(self, n: int, r: float) -> float:
        kind, val = _parse_q_rule(self.q_rule)
        if kind == "const":
            q = val
        elif kind == "pow":
            q = float(n) ** val
        else:
            q = (n * r ** self.d / math.log(n)) ** val
        if not 0.0 <= q < 1.0:
            raise ArgumentError(f"q_rule {self.q_rule!r} gives q={q} at n={n}")
        return q

    def to_json_dict(self) -> dict:
        out = {
            "model": self.model.value,
            "n_list": list(self.n_list),
            "d": self.d,
            "norm": self.norm.name.lower(),
            "p": self.p,
            "q_rule": self.q_rule,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "measures": [m.value for m in self.measures],
            "sigma": self.sigma,
        }
        if self.regime is not None:
            out["regime"] = self.regime.name
        for key in ("case", "alpha", "t", "stop_at", "measure_omega_base"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.node_budget != DEFAULT_NODE_BUDGET:
            out["node_budget"] = self.node_budget
        if self.witness:
            out["witness"] = True
        if self.workers != 1:
            out["workers"] = self.workers
        return out


def config_from_dict(data: dict) -> ExperimentConfig:
    known = {"model", "regime", "case", "n_list", "d", "norm", "p", "q_rule",
             "trials", "master_seed", "measures", "alpha", "t", "sigma",
             "node_budget", "stop_at", "measure_omega_base", "witness",
             "workers"}
    extra = set(data) - known
    if extra:
        raise ArgumentError(f"unknown config keys: {sorted(extra)}")
    try:
        model = ConfigModel(data["model"])
    except (KeyError, ValueError):
        raise ArgumentError(f"config needs model in "
                            f"{[m.value for m in ConfigModel]}")
    regime = None
    if data.get("regime") is not None:
        try:
            regime = Regime[str(data["regime"]).upper()]
        except KeyError:
            raise ArgumentError(f"unknown regime {data['regime']!r}")
    try:
        measures = tuple(Measure(m) for m in data["measures"])
    except ValueError as e:
        raise ArgumentError(str(e))
    return ExperimentConfig(
        model=model,
        regime=regime,
        case=data.get("case"),
        n_list=tuple(int(x) for x in data["n_list"]),
        d=int(data["d"]),
        norm=Norm.parse(data.get("norm", "l2")),
        p=float(data.get("p", 0.0)),
        q_rule=str(data["q_rule"]),
        trials=int(data["trials"]),
        master_seed=int(data["master_seed"]),
        measures=measures,
        alpha=(None if data.get("alpha") is None else float(data["alpha"])),
        t=(None if data.get("t") is None else float(data["t"])),
        sigma=float(data.get("sigma", 1.0)),
        node_budget=int(data.get("node_budget", DEFAULT_NODE_BUDGET)),
        stop_at=(None if data.get("stop_at") is None
                 else int(data["stop_at"])),
        measure_omega_base=data.get("measure_omega_base"),
        witness=bool(data.get("witness", False)),
        workers=int(data.get("workers", 1)),
    )


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


@dataclass
class TrialRow:
    """One (n, trial) outcome; CSV emits the fixed columns only."""

    n: int
    d: int
    r: float
    p: float
    q: float
    seed: int
    omega: Optional[int] = None
    omega_base: Optional[int] = None
    mw1: Optional[int] = None
    mw3: Optional[int] = None
    mwhalf: Optional[int] = None
    long_edges: Optional[int] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    lower_pred: Optional[float] = None
    upper_pred: Optional[float] = None
    wall_ms: int = 0
    edge_omega_long: Optional[int] = None
    wscp_size: Optional[int] = None
    witness: Optional[Tuple[int, ...]] = None
    timeout_fields: Tuple[str, ...] = ()

    @property
    def timed_out(self) -> bool:
        return bool(self.timeout_fields)


def _fmt_cell(val, col: str, row: TrialRow) -> str:
    if col in row.timeout_fields:
        return "TIMEOUT"
    if val is None:
        return ""
    if isinstance(val, float):
        return f"{val:.17g}"
    return str(val)


def row_to_csv(row: TrialRow, with_witness: bool = False) -> str:
    cells = [_fmt_cell(getattr(row, col), col, row) for col in CSV_COLUMNS]
    if with_witness:
        cells.append("" if row.witness is None else
                     "|".join(str(v) for v in row.witness))
    return ",".join(cells)


def run_trial(cfg: ExperimentConfig, n: int, trial_index: int) -> TrialRow:
    """Execute one seeded trial; deterministic in (cfg, n, trial_index)."""
    t0 = time.perf_counter()
    trial_seed = combine(cfg.master_seed, n, trial_index)
    cloud_seed = combine(trial_seed, 1)
    pert_seed = combine(trial_seed, 2)

    cloud = sample_uniform_cube(n, cfg.d, cloud_seed)
    if cfg.model is ConfigModel.ER_ONLY:
        r = 0.0
        base = empty_base(cloud, cfg.norm)
    else:
        r = radius_for_regime(cfg.regime_params(), n, cfg.d)
        base = build_geometric_graph(cloud, r, cfg.norm)

    q_eff = cfg.q_of(n, r)
    p_eff = cfg.p
    if cfg.model in (ConfigModel.INSERTION_ONLY, ConfigModel.ER_ONLY):
        p_eff = 0.0
    if cfg.model is ConfigModel.DELETION_ONLY:
        q_eff = 0.0

    pg = perturb(base, p_eff, q_eff, pert_seed)
    row = TrialRow(n=n, d=cfg.d, r=r, p=p_eff, q=q_eff, seed=trial_seed)
    timeouts: List[str] = []

    lu, lv = long_edges(pg)
    row.long_edges = int(lu.shape[0])

    if Measure.OMEGA in cfg.measures:
        res = max_clique(pg, stop_at=cfg.stop_at,
                         node_budget=cfg.node_budget)
        if res.budget_exhausted:
            timeouts.append("omega")
        else:
            row.omega = res.size
            if cfg.witness:
                row.witness = res.witness
        if cfg.wants_omega_base:
            res_b = max_clique(base, node_budget=cfg.node_budget)
            if res_b.budget_exhausted:
                timeouts.append("omega_base")
            else:
                row.omega_base = res_b.size

    if cfg.model is not ConfigModel.ER_ONLY:
        if Measure.M_W1 in cfg.measures:
            row.mw1 = scan_point_centered(
                ScanQuery(cloud, cfg.norm, r)).value
        if Measure.M_W3 in cfg.measures:
            row.mw3 = scan_point_centered(
                ScanQuery(cloud, cfg.norm, 3.0 * r)).value
        if Measure.M_W_HALF in cfg.measures:
            row.mwhalf = scan_point_centered(
                ScanQuery(cloud, cfg.norm, 0.5 * r)).value
        if Measure.WSCP_SIZE in cfg.measures:
            row.wscp_size = build_wscp(base).size

    if Measure.EDGE_OMEGA_LONG in cfg.measures and row.long_edges:
        try:
            row.edge_omega_long = max_edge_clique_number(
                pg, lu, lv, node_budget=cfg.node_budget)
        except NumericError:
            timeouts.append("edge_omega_long")

    if Measure.DENOISE_PR in cfg.measures:
        dn = denoise(pg, "auto", cfg.regime_params(),
                     node_budget=cfg.node_budget)
        if dn.timeouts:
            timeouts.append("precision")
        truth = set(pair_index(lu, lv, n).tolist())
        removed = set(pair_index(dn.removed_u, dn.removed_v, n).tolist())
        tp = len(truth & removed)
        row.precision = tp / len(removed) if removed else 1.0
        row.recall = tp / len(truth) if truth else 1.0

    _fill_predictions(cfg, row)
    row.timeout_fields = tuple(timeouts)
    row.wall_ms = int(round(1000.0 * (time.perf_counter() - t0)))
    return row


def _fill_predictions(cfg: ExperimentConfig, row: TrialRow) -> None:
    if cfg.model is ConfigModel.ER_ONLY:
        if 0.0 < row.q < 1.0:
            row.lower_pred = er_clique_lower(row.n, row.q)
        return
    if cfg.case is None:
        return
    pp = PredictParams(n=row.n, r=row.r, d=cfg.d, sigma=cfg.sigma,
                       theta=unit_ball_volume(cfg.d, cfg.norm),
                       p=row.p, q=row.q)
    try:
        ev = predict_omega(_THEORY_MODEL[cfg.model], cfg.case, pp)
    except (ArgumentError, NumericError):
        return
    row.lower_pred = ev.lower
    row.upper_pred = ev.upper


_SCALINGS: Dict[str, Callable[[TrialRow], float]] = {
    "one": lambda row: 1.0,
    "er": lambda row: math.log(row.n) / math.log(1.0 / row.q),
    "volume": lambda row: row.n * row.r ** row.d,
    "log_volume": lambda row: math.log(row.n * row.r ** row.d),
    "thermo": lambda row: math.log(row.n) / math.log(
        math.log(row.n) / (row.n * row.r ** row.d)),
    "log_thermo": lambda row: math.log(math.log(row.n) / math.log(
        math.log(row.n) / (row.n * row.r ** row.d))),
}

_CASE_SCALING = {
    (ConfigModel.INSERTION_ONLY, "I.a"): "one",
    (ConfigModel.INSERTION_ONLY, "I.b"): "er",
    (ConfigModel.INSERTION_ONLY, "II.a"): "thermo",
    (ConfigModel.INSERTION_ONLY, "II.b"): "er",
    (ConfigModel.INSERTION_ONLY, "III"): "volume",
    (ConfigModel.DELETION_ONLY, "I"): "one",
    (ConfigModel.DELETION_ONLY, "II"): "log_thermo",
    (ConfigModel.DELETION_ONLY, "III"): "log_volume",
    (ConfigModel.COMBINED, "I.a"): "one",
    (ConfigModel.COMBINED, "I.b"): "er",
    (ConfigModel.COMBINED, "II.a"): "log_thermo",
    (ConfigModel.COMBINED, "II.b"): "er",
    (ConfigModel.COMBINED, "III.a"): "log_volume",
    (ConfigModel.COMBINED, "III.b"): "er",
}


def ratio_fit(rows: Sequence[TrialRow],
              scaling: Union[str, Callable[[TrialRow], float]]) -> dict:
    """Ratio statistics omega/scaling over rows spanning >= 2 sizes.

    spread is max/min of the per-n mean ratios, the empirical stand-in
    for 'omega ~ f up to constants'.  Rows without a finished omega are
    skipped.
    """
    fn = _SCALINGS[scaling] if isinstance(scaling, str) else scaling
    usable = [row for row in rows if row.omega is not None]
    by_n: Dict[int, List[float]] = {}
    ratios: List[float] = []
    for row in usable:
        s = fn(row)
        if not s > 0:
            raise NumericError(
                f"scaling function nonpositive ({s}) at n={row.n}")
        ratio = row.omega / s
        ratios.append(ratio)
        by_n.setdefault(row.n, []).append(ratio)
    if len(by_n) < 2:
        raise ArgumentError("ratio_fit needs rows from >= 2 distinct n")
    means = [sum(v) / len(v) for _, v in sorted(by_n.items())]
    return {
        "min_ratio": min(ratios),
        "max_ratio": max(ratios),
        "mean_ratio": sum(ratios) / len(ratios),
        "spread": max(means) / min(means),
    }


def _trial_task(args) -> TrialRow:
    cfg, n, idx = args
    return run_trial(cfg, n, idx)


@dataclass
class SweepResult:
    rows: List[TrialRow]
    summary: dict
    csv_path: Optional[Path] = None

    @property
    def any_timeout(self) -> bool:
        return any(row.timed_out for row in self.rows)


def run_sweep(cfg: ExperimentConfig,
              out_path: Optional[Union[str, Path]] = None,
              svg_path: Optional[Union[str, Path]] = None) -> SweepResult:
    """Run all (n, trial) cells, write the CSV, and build the summary.

    Rows are emitted n-ascending then trial-ascending; with workers > 1
    the pool order is irrelevant because each row depends only on
    (config, n, trial_index).
    """
    tasks = [(cfg, n, idx) for n in cfg.n_list for idx in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_trial_task, tasks, chunksize=1))
    else:
        rows = [_trial_task(t) for t in tasks]

    csv_path = None
    if out_path is not None:
        csv_path = Path(out_path)
        header = CSV_HEADER + (",witness" if cfg.witness else "")
        lines = [header] + [row_to_csv(row, cfg.witness) for row in rows]
        csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    summary = summarize(cfg, rows)
    if svg_path is not None:
        write_svg(cfg, rows, svg_path)
    return SweepResult(rows=rows, summary=summary, csv_path=csv_path)


def _stats(vals: List[float]) -> dict:
    return {"mean": sum(vals) / len(vals), "min": min(vals),
            "max": max(vals)} if vals else {}


def summarize(cfg: ExperimentConfig, rows: Sequence[TrialRow]) -> dict:
    per_n = {}
    for n in cfg.n_list:
        sub = [row for row in rows if row.n == n]
        entry = {"rows": len(sub),
                 "omega": _stats([r.omega for r in sub
                                  if r.omega is not None])}
        for name in ("mw1", "mw3", "mwhalf", "wscp_size", "edge_omega_long",
                     "precision", "recall"):
            vals = [getattr(r, name) for r in sub
                    if getattr(r, name) is not None]
            if vals:
                entry[name] = _stats(vals)
        per_n[n] = entry

    with_lower = [r for r in rows
                  if r.omega is not None and r.lower_pred is not None]
    with_upper = [r for r in rows
                  if r.omega is not None and r.upper_pred is not None]
    band = {}
    if with_lower:
        band["lower_pass_rate"] = sum(
            r.omega >= r.lower_pred for r in with_lower) / len(with_lower)
    if with_upper:
        band["upper_pass_rate"] = sum(
            r.omega <= r.upper_pred for r in with_upper) / len(with_upper)

    coupled = [r for r in rows
               if r.omega is not None and r.omega_base is not None]
    summary = {
        "config": cfg.to_json_dict(),
        "rows": len(rows),
        "timeouts": sum(1 for r in rows if r.timed_out),
        "per_n": per_n,
        "band": band,
    }
    if coupled:
        summary["coupling_violations"] = sum(
            1 for r in coupled if r.omega > r.omega_base)
    tag = _CASE_SCALING.get((cfg.model, cfg.case))
    if tag is not None and len(cfg.n_list) >= 2:
        try:
            summary["ratio"] = dict(ratio_fit(rows, tag), scaling=tag)
        except (ArgumentError, NumericError):
            summary["ratio"] = None
    return summary


def write_svg(cfg: ExperimentConfig, rows: Sequence[TrialRow],
              path: Union[str, Path]) -> None:
    """Log-x plot of per-n omega spread with prediction bands, if present."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ns = sorted({row.n for row in rows})
    def per_n(getter):
        out = []
        for n in ns:
            vals = [getter(r) for r in rows
                    if r.n == n and getter(r) is not None]
            out.append(sum(vals) / len(vals) if vals else math.nan)
        return out

    means = per_n(lambda r: r.omega)
    ax.plot(ns, means, "o-", label="omega (mean)")
    lo = per_n(lambda r: r.lower_pred)
    hi = per_n(lambda r: r.upper_pred)
    if not all(math.isnan(v) for v in lo):
        ax.plot(ns, lo, "--", label="lower prediction")
    if not all(math.isnan(v) for v in hi):
        ax.plot(ns, hi, ":", label="upper prediction")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("clique number")
    title = cfg.model.value + (f" {cfg.case}" if cfg.case else "")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
