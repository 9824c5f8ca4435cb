"""Point clouds, geometric graphs and (p, q)-perturbations.

The generative model: n points sampled i.i.d. uniform on [0,1]^d, an edge
between two points when their distance is <= r, then independent noise:
each edge deleted with probability p, each non-edge inserted with
probability q.

Randomness contract (frozen).  For n <= 2^13 a perturbation with seed s
assigns one uniform u_k to every unordered pair, where k is the
lexicographic pair index of (i, j), i < j, and u_k is output k of the
SplitMix64 stream with seed s (see rng.py).  A base edge is kept iff
u_k >= p; a non-edge is inserted iff u_k < q.  Because the stream is
random-access, deletions are evaluated only at base-edge indices and
insertions by a vectorised scan of all pair indices.  This makes
realisations at fixed n and seed monotone-coupled: raising q only adds
edges, raising p only removes them.

For n > 2^13 the all-pairs scan is too expensive (2^31 draws at n=2^16),
so two derived streams are used instead: deletions draw uniform i of
stream A = combine(s, 0) for the i-th base edge in lexicographic edge
order (kept iff >= p), and insertions skip-sample the lexicographic
non-edge ranks with geometric gaps driven by consecutive uniforms of
stream B = combine(s, 1).  Both paths are exact Bernoulli samplers and
both are frozen; they differ only in which pair gets which uniform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import ArgumentError
from .geometry import Norm, dist_block, unit_ball_volume
from .rng import combine, uniforms, uniforms_at

_FMT = "%.17g"  # float serialisation: 17 significant digits round-trip float64


# ---------------------------------------------------------------------------
# point clouds


@dataclass(eq=False)
class PointCloud:
    """n points in R^d with the sampling metadata needed to regenerate them."""

    d: int
    points: np.ndarray  # (n, d) float64
    sigma: float = 1.0
    seed: int = 0
    domain: str = "unit-cube"

    @property
    def n(self) -> int:
        return int(self.points.shape[0])


def sample_uniform_cube(n: int, d: int, seed: int) -> PointCloud:
    """n i.i.d. uniform points on [0,1]^d, deterministic in seed."""
    if n < 0 or d < 1:
        raise ArgumentError(f"need n >= 0 and d >= 1, got n={n}, d={d}")
    pts = uniforms(seed, 0, n * d).reshape(n, d)
    return PointCloud(d=d, points=pts, sigma=1.0, seed=seed)


# ---------------------------------------------------------------------------
# regimes


class Regime(Enum):
    SUBCRITICAL = "SUBCRITICAL"
    THERMODYNAMIC = "THERMODYNAMIC"
    SUPERCRITICAL = "SUPERCRITICAL"


def default_thermo_schedule(n: int) -> float:
    return math.log(n) / math.log(math.log(n))


@dataclass
class RegimeParams:
    """A connectivity regime and the parameter that pins its radius."""

    regime: Regime
    alpha: Optional[float] = None  # subcritical: n r^d = n^-alpha
    t: Optional[float] = None      # supercritical: sigma n r^d / ln n -> t
    sigma: float = 1.0
    # thermodynamic schedule g(n); 1 << g(n) << ln n required of callers
    schedule: Callable[[int], float] = field(default=default_thermo_schedule)
    schedule_tag: str = "logn/loglogn"


def radius_for_regime(params: RegimeParams, n: int, d: int) -> float:
    """The radius realising the regime at size n in dimension d."""
    if n < 1 or d < 1:
        raise ArgumentError(f"need n >= 1, d >= 1, got n={n}, d={d}")
    reg = params.regime
    if reg is Regime.SUBCRITICAL:
        if params.alpha is None or params.alpha <= 0:
            raise ArgumentError("subcritical regime needs alpha > 0")
        return float(n ** (-(1.0 + params.alpha) / d))
    if n < 3:
        raise ArgumentError(f"{reg.value} regime needs n >= 3, got {n}")
    if reg is Regime.THERMODYNAMIC:
        g = float(params.schedule(n))
        if g <= 0:
            raise ArgumentError(f"thermodynamic schedule must be positive, got {g}")
        return float((g / n) ** (1.0 / d))
    if reg is Regime.SUPERCRITICAL:
        if params.t is None or params.t <= 0:
            raise ArgumentError("supercritical regime needs t > 0")
        if params.sigma <= 0:
            raise ArgumentError("sigma must be positive")
        return float((params.t * math.log(n) / (params.sigma * n)) ** (1.0 / d))
    raise ArgumentError(f"unknown regime {reg!r}")


# ---------------------------------------------------------------------------
# pair indexing (lexicographic over unordered pairs, i < j)


def pair_index(i: np.ndarray, j: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic index of pair (i, j) with i < j among all n-choose-2."""
    i = np.asarray(i, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    nn = np.uint64(n)
    return i * (np.uint64(2) * nn - i - np.uint64(1)) // np.uint64(2) + (j - i - np.uint64(1))


def pair_unindex(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of pair_index, vectorised; float solve with exact correction."""
    k = np.asarray(k, dtype=np.uint64)
    b = 2.0 * n - 1.0
    i = np.floor((b - np.sqrt(b * b - 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    np.clip(i, 0, n - 2, out=i)
    # correct off-by-one from the float sqrt
    for _ in range(2):
        s = i.astype(np.uint64) * (np.uint64(2 * n) - i.astype(np.uint64) - np.uint64(1)) // np.uint64(2)
        i = np.where(s > k, i - 1, i)
        s2 = (i + 1).astype(np.uint64) * (np.uint64(2 * n) - (i + 1).astype(np.uint64) - np.uint64(1)) // np.uint64(2)
        i = np.where((s2 <= k) & (i + 1 <= n - 2), i + 1, i)
    s = i.astype(np.uint64) * (np.uint64(2 * n) - i.astype(np.uint64) - np.uint64(1)) // np.uint64(2)
    j = (k - s).astype(np.int64) + i + 1
    return i, j


# ---------------------------------------------------------------------------
# geometric graph


@dataclass(eq=False)
class GeometricGraph:
    """Distance graph on a cloud: edge iff distance <= r under norm.

    Adjacency is CSR with each row sorted ascending; edges_u/edges_v list
    each edge once with u < v, sorted lexicographically.
    """

    cloud: PointCloud
    r: float
    norm: Norm
    indptr: np.ndarray   # int64, length n+1
    indices: np.ndarray  # int32, length 2m
    edges_u: np.ndarray  # int32, length m
    edges_v: np.ndarray  # int32, length m

    @property
    def n(self) -> int:
        return self.cloud.n

    @property
    def m(self) -> int:
        return int(self.edges_u.shape[0])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.shape[0] and row[k] == v)


def _csr_from_pairs(n: int, eu: np.ndarray, ev: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric CSR with sorted rows from an edge list (each edge once)."""
    deg = np.bincount(eu, minlength=n) + np.bincount(ev, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int32)
    fill = indptr[:-1].copy()
    from ._kernels import fill_csr_rows

    fill_csr_rows(eu.astype(np.int32), ev.astype(np.int32), indices, fill, indptr)
    return indptr, indices


def _block_pairs(pa: np.ndarray, pb: np.ndarray, r: float, norm: Norm,
                 same: bool) -> tuple[np.ndarray, np.ndarray]:
    """Local index pairs at distance <= r between two coordinate blocks."""
    rows = []
    cols = []
    step = max(1, int(4_000_000 // max(1, pb.shape[0])))
    for lo in range(0, pa.shape[0], step):
        m = dist_block(pa[lo:lo + step], pb, norm) <= r
        if same:
            # strict upper triangle of the full block
            ii, jj = np.nonzero(m)
            keep = (ii + lo) < jj
            rows.append((ii + lo)[keep])
            cols.append(jj[keep])
        else:
            ii, jj = np.nonzero(m)
            rows.append(ii + lo)
            cols.append(jj)
    return (np.concatenate(rows) if rows else np.empty(0, np.int64),
            np.concatenate(cols) if cols else np.empty(0, np.int64))


def build_geometric_graph(cloud: PointCloud, r: float, norm: Norm = Norm.L2) -> GeometricGraph:
    """Exact distance graph via grid bucketing (cell side r, 3^d stencil).

    All three norms dominate the max-norm, so <= r neighbours live in the
    3^d surrounding cells; the result is identical to the quadratic scan.
    """
    if r <= 0 or not math.isfinite(r):
        raise ArgumentError(f"radius must be positive and finite, got {r}")
    pts = cloud.points
    n, d = pts.shape
    if n <= 1:
        e = np.empty(0, dtype=np.int32)
        return GeometricGraph(cloud, r, norm, np.zeros(n + 1, np.int64), e.copy(), e.copy(), e.copy())

    cell = np.floor(pts / r).astype(np.int64)
    cmin = cell.min(axis=0)
    cell -= cmin
    extent = cell.max(axis=0) + 1
    strides = np.ones(d, dtype=np.int64)
    for k in range(d - 2, -1, -1):
        strides[k] = strides[k + 1] * extent[k + 1]
    key = cell @ strides
    order = np.argsort(key, kind="stable").astype(np.int64)
    sk = key[order]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    bounds = np.r_[starts, sk.shape[0]]
    ukeys = sk[starts]
    lookup = {int(k_): idx for idx, k_ in enumerate(ukeys)}
    ucoords = cell[order[starts]]

    # offsets scanned once per unordered cell pair: self plus the half of
    # the 3^d stencil that is lexicographically positive
    offs = []
    for flat in range(3 ** d):
        o, x = [], flat
        for _ in range(d):
            o.append(x % 3 - 1)
            x //= 3
        o = tuple(reversed(o))
        if o > (0,) * d:
            offs.append(o)
    offs_arr = np.array(offs, dtype=np.int64).reshape(len(offs), d)

    us, vs = [], []
    for ci in range(ukeys.shape[0]):
        a0, a1 = bounds[ci], bounds[ci + 1]
        ga = order[a0:a1]
        pa = pts[ga]
        ii, jj = _block_pairs(pa, pa, r, norm, same=True)
        if ii.size:
            us.append(ga[ii])
            vs.append(ga[jj])
        base = ucoords[ci]
        for off in offs_arr:
            nb = base + off
            nk = int(nb @ strides)
            cj = lookup.get(nk)
            if cj is None:
                continue
            # flattened keys collide only for coordinates outside the
            # occupied bounding box; verify the actual cell coordinate
            if not np.array_equal(ucoords[cj], nb):
                continue
            b0, b1 = bounds[cj], bounds[cj + 1]
            gb = order[b0:b1]
            ii, jj = _block_pairs(pa, pts[gb], r, norm, same=False)
            if ii.size:
                us.append(ga[ii])
                vs.append(gb[jj])

    if us:
        eu = np.concatenate(us)
        ev = np.concatenate(vs)
        swap = eu > ev
        eu2 = np.where(swap, ev, eu).astype(np.int32)
        ev2 = np.where(swap, eu, ev).astype(np.int32)
    else:
        eu2 = np.empty(0, dtype=np.int32)
        ev2 = np.empty(0, dtype=np.int32)
    indptr, indices = _csr_from_pairs(n, eu2, ev2)
    edges_u, edges_v = _edges_from_csr(n, indptr, indices)
    return GeometricGraph(cloud, r, norm, indptr, indices, edges_u, edges_v)


def _edges_from_csr(n: int, indptr: np.ndarray, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographically sorted (u < v) edge list from sorted-row CSR."""
    deg = np.diff(indptr)
    rows = np.repeat(np.arange(n, dtype=np.int32), deg)
    mask = indices > rows
    return rows[mask], indices[mask].copy()


def empty_base(cloud: PointCloud, norm: Norm = Norm.L2) -> GeometricGraph:
    """Edgeless base graph (r = 0), the substrate for pure noise graphs.

    Distinct points are required so that 'distance <= 0' never holds and
    the adjacency contract stays exact.
    """
    pts = cloud.points
    if pts.shape[0] > 1:
        o = np.lexsort(pts.T[::-1])
        if bool(np.any(np.all(pts[o][1:] == pts[o][:-1], axis=1))):
            raise ArgumentError("empty_base requires pairwise distinct points")
    e = np.empty(0, dtype=np.int32)
    return GeometricGraph(cloud, 0.0, norm, np.zeros(cloud.n + 1, np.int64), e.copy(), e.copy(), e.copy())


# ---------------------------------------------------------------------------
# perturbation


class EdgeLabel(Enum):
    GEOMETRIC_KEPT = "G"
    INSERTED = "I"


@dataclass(eq=False)
class PerturbedGraph:
    """A (p, q)-perturbation of a base geometric graph."""

    base: GeometricGraph
    p: float
    q: float
    seed: int
    indptr: np.ndarray
    indices: np.ndarray
    kept_u: np.ndarray
    kept_v: np.ndarray
    ins_u: np.ndarray
    ins_v: np.ndarray

    @property
    def cloud(self) -> PointCloud:
        return self.base.cloud

    @property
    def r(self) -> float:
        return self.base.r

    @property
    def norm(self) -> Norm:
        return self.base.norm

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return int(self.kept_u.shape[0] + self.ins_u.shape[0])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.shape[0] and row[k] == v)

    @property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """All edges, u < v, lexicographically sorted."""
        return _edges_from_csr(self.n, self.indptr, self.indices)

    def label_of(self, u: int, v: int) -> EdgeLabel:
        if u == v or not self.has_edge(u, v):
            raise ArgumentError(f"({u}, {v}) is not an edge")
        a, b = (u, v) if u < v else (v, u)
        k = pair_index(np.array([a]), np.array([b]), self.n)[0]
        kk = pair_index(self.kept_u.astype(np.int64), self.kept_v.astype(np.int64), self.n)
        pos = np.searchsorted(kk, k)
        if pos < kk.shape[0] and kk[pos] == k:
            return EdgeLabel.GEOMETRIC_KEPT
        return EdgeLabel.INSERTED

    @property
    def edge_labels(self) -> dict[tuple[int, int], EdgeLabel]:
        """Materialised label map; intended for small graphs."""
        out: dict[tuple[int, int], EdgeLabel] = {}
        for u, v in zip(self.kept_u.tolist(), self.kept_v.tolist()):
            out[(u, v)] = EdgeLabel.GEOMETRIC_KEPT
        for u, v in zip(self.ins_u.tolist(), self.ins_v.tolist()):
            out[(u, v)] = EdgeLabel.INSERTED
        return out


_INSERT_CHUNK = 1 << 22
_PAIRWISE_MAX_N = 1 << 13
_JUMP_BLOCK = 1 << 20


def _pairwise_draws(n, eu, ev, p, q, seed):
    """One uniform per unordered pair, lexicographic pair order."""
    if p > 0.0 and eu.shape[0]:
        k_edges = pair_index(eu.astype(np.int64), ev.astype(np.int64), n)
        keep = uniforms_at(seed, k_edges) >= p
    else:
        keep = np.ones(eu.shape[0], dtype=bool)

    kidx = np.empty(0, dtype=np.uint64)
    if q > 0.0 and n > 1:
        base_idx = pair_index(eu.astype(np.int64), ev.astype(np.int64), n)
        total = n * (n - 1) // 2
        picked = []
        for lo in range(0, total, _INSERT_CHUNK):
            cnt = min(_INSERT_CHUNK, total - lo)
            u = uniforms(seed, lo, cnt)
            hits = np.flatnonzero(u < q).astype(np.uint64) + np.uint64(lo)
            if hits.size:
                picked.append(hits)
        if picked:
            kidx = np.concatenate(picked)
            if base_idx.shape[0]:
                # drop base edges (those pairs test against p)
                pos = np.minimum(np.searchsorted(base_idx, kidx),
                                 base_idx.shape[0] - 1)
                kidx = kidx[base_idx[pos] != kidx]
    return keep, kidx


def _geometric_hits(seed: int, total: int, q: float) -> np.ndarray:
    """Positions in [0, total) hit w.p. q each, by geometric skip sampling.

    Gap i uses 1 - u_i (in (0, 1], so the log never blows up), u_i the
    i-th uniform of the stream.
    """
    if total <= 0:
        return np.empty(0, dtype=np.int64)
    if q >= 1.0:
        return np.arange(total, dtype=np.int64)
    lq = math.log1p(-q)
    out = []
    pos = -1
    cursor = 0
    while True:
        count = min(_JUMP_BLOCK, int((total - pos) * q * 1.2) + 64)
        u = uniforms(seed, cursor, count)
        cursor += count
        gaps = np.floor(np.log1p(-u) / lq).astype(np.int64) + 1
        cum = pos + np.cumsum(gaps)
        out.append(cum[cum < total])
        if cum[-1] >= total:
            break
        pos = int(cum[-1])
    return np.concatenate(out)


def _nonedge_rank_to_pair_index(ranks: np.ndarray,
                                base_idx: np.ndarray) -> np.ndarray:
    """Pair index of the rank-th non-edge, given sorted base edge indices.

    Fixpoint of k = rank + (number of base indices < k); converges because
    each searchsorted pass accounts for every base edge in the jump.
    """
    j = np.zeros(ranks.shape[0], dtype=np.int64)
    while True:
        j2 = np.searchsorted(base_idx, ranks + j, side="right")
        if np.array_equal(j, j2):
            return (ranks + j).astype(np.uint64)
        j = j2


def _streamed_draws(n, eu, ev, p, q, seed):
    """Two derived streams: per-edge deletions, skip-sampled insertions."""
    m = eu.shape[0]
    if p > 0.0 and m:
        keep = uniforms(combine(seed, 0), 0, m) >= p
    else:
        keep = np.ones(m, dtype=bool)

    kidx = np.empty(0, dtype=np.uint64)
    if q > 0.0 and n > 1:
        total = n * (n - 1) // 2
        ranks = _geometric_hits(combine(seed, 1), total - m, q)
        if ranks.size:
            base_idx = pair_index(eu.astype(np.int64), ev.astype(np.int64), n)
            kidx = _nonedge_rank_to_pair_index(ranks, base_idx.astype(np.int64))
    return keep, kidx


def perturb(base: GeometricGraph, p: float, q: float, seed: int) -> PerturbedGraph:
    """Apply (p, q) noise to a base graph under the frozen draw scheme.

    n <= 2^13 uses the all-pairs uniform assignment; larger n switches to
    the derived-stream sampler (see the module docstring).  Both are part
    of the reproducibility contract.
    """
    if not (0.0 <= p <= 1.0) or not (0.0 <= q <= 1.0):
        raise ArgumentError(f"p and q must lie in [0, 1], got p={p}, q={q}")
    n = base.n
    eu, ev = base.edges_u, base.edges_v
    if n <= _PAIRWISE_MAX_N:
        keep, kidx = _pairwise_draws(n, eu, ev, p, q, seed)
    else:
        keep, kidx = _streamed_draws(n, eu, ev, p, q, seed)

    kept_u, kept_v = eu[keep].copy(), ev[keep].copy()
    if kidx.size:
        ii, jj = pair_unindex(kidx, n)
        ins_u = ii.astype(np.int32)
        ins_v = jj.astype(np.int32)
    else:
        ins_u = np.empty(0, dtype=np.int32)
        ins_v = np.empty(0, dtype=np.int32)

    all_u = np.concatenate([kept_u, ins_u])
    all_v = np.concatenate([kept_v, ins_v])
    indptr, indices = _csr_from_pairs(n, all_u, all_v)
    return PerturbedGraph(base, p, q, seed, indptr, indices,
                          kept_u, kept_v, ins_u, ins_v)


def identity_perturbation(base: GeometricGraph, seed: int = 0) -> PerturbedGraph:
    """perturb with p = q = 0; equals the base graph edge-for-edge."""
    return perturb(base, 0.0, 0.0, seed)


# ---------------------------------------------------------------------------
# long edges


def edge_distances(g, chunk: int = 1 << 20) -> np.ndarray:
    """Distance of every edge of g (lex edge order)."""
    pts = g.cloud.points if hasattr(g, "cloud") else g.base.cloud.points
    if isinstance(g, GeometricGraph):
        eu, ev = g.edges_u, g.edges_v
    else:
        eu, ev = g.edges
    norm = g.norm
    out = np.empty(eu.shape[0], dtype=np.float64)
    for lo in range(0, eu.shape[0], chunk):
        a = pts[eu[lo:lo + chunk].astype(np.int64)]
        b = pts[ev[lo:lo + chunk].astype(np.int64)]
        v = a - b
        if norm is Norm.L2:
            out[lo:lo + chunk] = np.sqrt(np.sum(v * v, axis=1))
        elif norm is Norm.L1:
            out[lo:lo + chunk] = np.sum(np.abs(v), axis=1)
        else:
            out[lo:lo + chunk] = np.max(np.abs(v), axis=1)
    return out


def long_edges(g) -> tuple[np.ndarray, np.ndarray]:
    """Edges whose endpoint distance strictly exceeds 3r."""
    if isinstance(g, GeometricGraph):
        eu, ev = g.edges_u, g.edges_v
    else:
        eu, ev = g.edges
    d = edge_distances(g)
    mask = d > 3.0 * g.r
    return eu[mask].copy(), ev[mask].copy()


# ---------------------------------------------------------------------------
# serialisation: graph text format v1 and points CSV

_MAGIC = "NRGG v1"


def _fmt_f(x: float) -> str:
    return _FMT % (x,)


def write_graph(path, g) -> None:
    """Graph text format v1.

    Header line, then V lines (id then coordinates) sorted by id, then E
    lines (u < v, lexicographic) with a G/I label.  Floats use 17
    significant digits so a write/read/write cycle is byte-stable.
    """
    if isinstance(g, GeometricGraph):
        p, q, seed = 0.0, 0.0, g.cloud.seed
        eu, ev = g.edges_u, g.edges_v
        labels = None
    else:
        p, q, seed = g.p, g.q, g.seed
        eu, ev = g.edges
        kk = set(zip(g.kept_u.tolist(), g.kept_v.tolist()))
        labels = ["G" if (u, v) in kk else "I" for u, v in zip(eu.tolist(), ev.tolist())]
    cloud = g.cloud if isinstance(g, GeometricGraph) else g.base.cloud
    n, d = cloud.n, cloud.d
    lines = [f"{_MAGIC} n={n} d={d} r={_fmt_f(g.r)} norm={g.norm.value} "
             f"p={_fmt_f(p)} q={_fmt_f(q)} seed={seed}"]
    for i in range(n):
        coords = " ".join(_fmt_f(x) for x in cloud.points[i])
        lines.append(f"V {i} {coords}")
    if labels is None:
        for u, v in zip(eu.tolist(), ev.tolist()):
            lines.append(f"E {u} {v} G")
    else:
        for (u, v), lab in zip(zip(eu.tolist(), ev.tolist()), labels):
            lines.append(f"E {u} {v} {lab}")
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_graph(path):
    """Parse graph text format v1; returns GeometricGraph or PerturbedGraph.

    A file with p = q = 0 and all-G labels loads as a plain geometric
    graph.  Otherwise the base graph is rebuilt from the coordinates and
    the radius, and the stored labels are validated against it: G edges
    must be base edges, I edges must not be.
    """
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path) as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(_MAGIC):
        raise ArgumentError("not a graph text v1 file (bad magic)")
    head = {}
    for tok in lines[0][len(_MAGIC):].split():
        k, _, v = tok.partition("=")
        head[k] = v
    try:
        n = int(head["n"]); d = int(head["d"]); r = float(head["r"])
        norm = Norm.parse(head["norm"]); p = float(head["p"]); q = float(head["q"])
        seed = int(head["seed"])
    except (KeyError, ValueError) as exc:
        raise ArgumentError(f"malformed header: {exc}") from None
    pts = np.full((n, d), np.nan, dtype=np.float64)
    eu, ev, lab = [], [], []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "V":
            i = int(parts[1])
            if not (0 <= i < n) or len(parts) != d + 2:
                raise ArgumentError(f"bad V line: {ln!r}")
            pts[i] = [float(x) for x in parts[2:]]
        elif parts[0] == "E":
            if len(parts) != 4 or parts[3] not in ("G", "I"):
                raise ArgumentError(f"bad E line: {ln!r}")
            u, v = int(parts[1]), int(parts[2])
            if not (0 <= u < v < n):
                raise ArgumentError(f"bad edge endpoints: {ln!r}")
            eu.append(u); ev.append(v); lab.append(parts[3])
        else:
            raise ArgumentError(f"unrecognised line: {ln!r}")
    if np.isnan(pts).any():
        raise ArgumentError("missing V lines")
    cloud = PointCloud(d=d, points=pts, sigma=1.0, seed=seed)
    eu_a = np.asarray(eu, dtype=np.int32)
    ev_a = np.asarray(ev, dtype=np.int32)
    lab_a = np.asarray(lab)
    if p == 0.0 and q == 0.0 and (lab_a == "G").all():
        base = build_geometric_graph(cloud, r, norm) if r > 0 else empty_base(cloud, norm)
        stored = set(zip(eu, ev))
        built = set(zip(base.edges_u.tolist(), base.edges_v.tolist()))
        if stored != built:
            raise ArgumentError("stored edges disagree with coordinates and radius")
        return base
    base = build_geometric_graph(cloud, r, norm) if r > 0 else empty_base(cloud, norm)
    base_pairs = set(zip(base.edges_u.tolist(), base.edges_v.tolist()))
    g_mask = lab_a == "G"
    for u, v in zip(eu_a[g_mask].tolist(), ev_a[g_mask].tolist()):
        if (u, v) not in base_pairs:
            raise ArgumentError(f"G-labelled edge ({u},{v}) is not a base edge")
    for u, v in zip(eu_a[~g_mask].tolist(), ev_a[~g_mask].tolist()):
        if (u, v) in base_pairs:
            raise ArgumentError(f"I-labelled edge ({u},{v}) is a base edge")
    indptr, indices = _csr_from_pairs(n, eu_a, ev_a)
    return PerturbedGraph(base, p, q, seed, indptr, indices,
                          eu_a[g_mask].copy(), ev_a[g_mask].copy(),
                          eu_a[~g_mask].copy(), ev_a[~g_mask].copy())


def write_points_csv(path, cloud: PointCloud) -> None:
    header = "id," + ",".join(f"x{k}" for k in range(cloud.d))
    rows = [header]
    for i in range(cloud.n):
        rows.append(f"{i}," + ",".join(_fmt_f(x) for x in cloud.points[i]))
    text = "\n".join(rows) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_points_csv(path) -> PointCloud:
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path) as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split(",")
    if head[0] != "id" or any(h != f"x{k}" for k, h in enumerate(head[1:])):
        raise ArgumentError("bad points CSV header")
    d = len(head) - 1
    n = len(lines) - 1
    pts = np.full((n, d), np.nan, dtype=np.float64)
    for ln in lines[1:]:
        parts = ln.split(",")
        i = int(parts[0])
        if not (0 <= i < n) or len(parts) != d + 1:
            raise ArgumentError(f"bad points CSV row: {ln!r}")
        pts[i] = [float(x) for x in parts[1:]]
    if np.isnan(pts).any():
        raise ArgumentError("points CSV has missing ids")
    return PointCloud(d=d, points=pts)


# ---------------------------------------------------------------------------
# densities


def expected_degree(n: int, r: float, d: int, norm: Norm, sigma: float = 1.0) -> float:
    """sigma * theta * n * r^d, the bulk mean degree (boundary ignored)."""
    return sigma * unit_ball_volume(d, norm) * n * r ** d
