"""Scan statistics over ball windows: exact low-dimensional maxima and
point-centered lower bounds.

The exact solvers enumerate a finite candidate-center set that provably
contains an optimal translate (in real arithmetic) and take the verified
count at the best candidate, so every reported value is re-checkable by
counting points within the query radius of the returned witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Tuple

import numpy as np

from .errors import ArgumentError, CapabilityError
from .geometry import Norm, dist_block
from .model import GeometricGraph, PointCloud, build_geometric_graph
from .theory import Window

_BLOCK = 4096


class ScanMethod(Enum):
    EXACT = "exact"
    POINT_CENTERED = "point_centered"


@dataclass(frozen=True)
class ScanQuery:
    """A cloud plus the absolute ball radius to scan with."""

    cloud: PointCloud
    norm: Norm
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ArgumentError(f"scan radius must be > 0, got {self.radius}")
        if self.cloud.n < 1:
            raise ArgumentError("scan needs at least one point")


@dataclass(frozen=True)
class ScanResult:
    value: int
    center_witness: np.ndarray
    method: ScanMethod


def count_within(points: np.ndarray, center: np.ndarray, radius: float,
                 norm: Norm) -> int:
    """Points at distance <= radius from center; the re-verification count."""
    c = np.asarray(center, dtype=np.float64).reshape(1, -1)
    total = 0
    for s in range(0, len(points), _BLOCK):
        d = dist_block(points[s:s + _BLOCK], c, norm)[:, 0]
        total += int(np.count_nonzero(d <= radius))
    return total


class _Grid:
    """Bucket points into cubes of the query radius for 3^d stencil counts."""

    def __init__(self, points: np.ndarray, side: float, origin: np.ndarray):
        self.points = points
        self.side = side
        self.origin = origin
        cells = np.floor((points - origin) / side).astype(np.int64)
        self.dims = cells.max(axis=0) + 1 if len(points) else np.ones(
            points.shape[1], dtype=np.int64)
        strides = np.ones(points.shape[1], dtype=np.int64)
        for k in range(points.shape[1] - 2, -1, -1):
            strides[k] = strides[k + 1] * self.dims[k + 1]
        self.strides = strides
        keys = cells @ strides
        self.order = np.argsort(keys, kind="stable")
        sk = keys[self.order]
        starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]]) if len(
            sk) else np.empty(0, dtype=np.int64)
        self.starts = starts
        self.ends = np.r_[starts[1:], len(sk)] if len(starts) else starts
        self.span: Dict[int, Tuple[int, int]] = {
            int(sk[s]): (int(s), int(e))
            for s, e in zip(self.starts, self.ends)
        }

    def cell_of(self, pts: np.ndarray) -> np.ndarray:
        return np.floor((pts - self.origin) / self.side).astype(np.int64)

    def gather(self, cell: np.ndarray) -> np.ndarray:
        """Indices of points in the 3^d stencil around one cell."""
        d = len(cell)
        chunks: List[np.ndarray] = []
        for off in np.ndindex(*([3] * d)):
            nb = cell + np.asarray(off, dtype=np.int64) - 1
            if np.any(nb < 0) or np.any(nb >= self.dims):
                continue
            span = self.span.get(int(nb @ self.strides))
            if span is not None:
                chunks.append(self.order[span[0]:span[1]])
        if not chunks:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(chunks)


def _counts_at(points: np.ndarray, centers: np.ndarray, radius: float,
               norm: Norm) -> np.ndarray:
    """Number of points within radius of each center (closed balls)."""
    n, d = points.shape
    if len(centers) == 0:
        return np.empty(0, dtype=np.int64)
    origin = np.minimum(points.min(axis=0), centers.min(axis=0))
    grid = _Grid(points, radius, origin)
    ccells = grid.cell_of(centers)
    ckeys = ccells @ grid.strides
    out = np.zeros(len(centers), dtype=np.int64)
    corder = np.argsort(ckeys, kind="stable")
    sk = ckeys[corder]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    ends = np.r_[starts[1:], len(sk)]
    for s, e in zip(starts, ends):
        grp = corder[s:e]
        near = grid.gather(ccells[grp[0]])
        if len(near) == 0:
            continue
        sub = points[near]
        for b in range(0, len(grp), _BLOCK):
            blk = grp[b:b + _BLOCK]
            dm = dist_block(centers[blk], sub, norm)
            out[blk] = np.count_nonzero(dm <= radius, axis=1)
    return out


def scan_point_centered(q: ScanQuery) -> ScanResult:
    """Best ball centered at a data point; a lower bound on the true scan.

    Sandwich guarantee via the triangle inequality:
    point_centered(s) <= exact(s) <= point_centered(2s).
    Witness tie-break: lowest point index.
    """
    pts = q.cloud.points
    counts = _counts_at(pts, pts, q.radius, q.norm)
    idx = int(np.argmax(counts))
    return ScanResult(value=int(counts[idx]),
                      center_witness=pts[idx].copy(),
                      method=ScanMethod.POINT_CENTERED)


def _best_box(pts: np.ndarray, idx: np.ndarray, h: float, axis: int,
              floor: int) -> Tuple[int, np.ndarray]:
    # best axis-aligned cube of side 2h over the given subset, sweeping
    # windows whose low face touches a point; prunes subsets <= floor
    xs = pts[idx, axis]
    order = np.argsort(xs, kind="stable")
    sx = xs[order]
    m = len(idx)
    last = axis == pts.shape[1] - 1
    best = floor
    best_idx = np.empty(0, dtype=np.int64)
    j = 0
    for i in range(m):
        if m - i <= best:
            break
        if j < i:
            j = i
        hi = sx[i] + 2.0 * h
        while j + 1 < m and sx[j + 1] <= hi:
            j += 1
        cnt = j - i + 1
        if cnt <= best:
            continue
        window = idx[order[i:j + 1]]
        if last:
            best = cnt
            best_idx = window
        else:
            sub_cnt, sub_idx = _best_box(pts, window, h, axis + 1, best)
            if sub_cnt > best:
                best = sub_cnt
                best_idx = sub_idx
    return best, best_idx


def _disk_centers(pts: np.ndarray, h: float) -> np.ndarray:
    # centers of radius-h circles through each pair closer than 2h; the
    # radius is shrunk by 1e-12 relatively so the defining pair lands
    # strictly inside the closed ball under rounding
    cloud = PointCloud(d=2, points=pts)
    g = build_geometric_graph(cloud, 2.0 * h, Norm.L2)
    u, v = g.edges_u, g.edges_v
    if len(u) == 0:
        return np.empty((0, 2), dtype=np.float64)
    a, b = pts[u], pts[v]
    mid = 0.5 * (a + b)
    diff = b - a
    dist = np.sqrt(np.sum(diff * diff, axis=1))
    keep = dist > 0
    mid, diff, dist = mid[keep], diff[keep], dist[keep]
    hs = h * (1.0 - 1e-12)
    s2 = hs * hs - 0.25 * dist * dist
    s = np.sqrt(np.maximum(s2, 0.0)) / dist
    perp = np.stack([-diff[:, 1], diff[:, 0]], axis=1)
    offs = perp * s[:, None]
    return np.concatenate([mid + offs, mid - offs], axis=0)


def scan_exact(q: ScanQuery) -> ScanResult:
    """Exact maximum of points covered by a translate of the query ball.

    Supported: d = 1 for every norm (interval sweep), L2 in d = 2
    (two-boundary-point candidate centers), LInf in d <= 3 (nested
    axis-interval sweeps).  Anything else raises CapabilityError;
    scan_point_centered still brackets the true value there.
    """
    pts = q.cloud.points
    d = q.cloud.d
    h = q.radius
    pc = scan_point_centered(q)
    value, witness = pc.value, pc.center_witness
    if d == 1 or (q.norm is Norm.LINF and d <= 3):
        cnt, idx = _best_box(pts, np.arange(len(pts)), h, 0, value)
        if cnt > value and len(idx):
            # midpoint of the winning subset's bounding box; its half-extent
            # is <= h in real arithmetic, so the verified recount is exact
            # outside knife-edge boundary ties
            center = 0.5 * (pts[idx].min(axis=0) + pts[idx].max(axis=0))
            got = count_within(pts, center, h, q.norm)
            if got > value:
                value, witness = got, center
    elif q.norm is Norm.L2 and d == 2:
        centers = _disk_centers(pts, h)
        if len(centers):
            counts = _counts_at(pts, centers, h, q.norm)
            k = int(np.argmax(counts))
            if counts[k] > value:
                value, witness = int(counts[k]), centers[k]
    else:
        raise CapabilityError(
            f"exact scan unsupported for d={d} norm={q.norm.name}; "
            "use scan_point_centered for sandwich bounds")
    return ScanResult(value=int(value), center_witness=np.asarray(witness),
                      method=ScanMethod.EXACT)


class OccupancyResult(NamedTuple):
    passed: bool
    observed: int
    bound: float
    window: Window


def occupancy_check(g: GeometricGraph, window: Window,
                    bound: float) -> OccupancyResult:
    """Check a scan-statistic bound on the graph's cloud.

    Uses the point-centered value, a lower bound on the true scan
    statistic, so exceeding the bound already falsifies the claim.
    """
    if window is Window.W_HALF:
        raise ArgumentError("occupancy bounds are stated for W1 and W3")
    q = ScanQuery(cloud=g.cloud, norm=g.norm, radius=window.multiple * g.r)
    res = scan_point_centered(q)
    return OccupancyResult(passed=res.value <= bound, observed=res.value,
                           bound=float(bound), window=window)
