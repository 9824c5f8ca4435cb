"""Exact clique computations: clique number, edge clique numbers, denoising.

max_clique is an exact branch-and-bound (greedy-colouring bound, pivoting
by colour order, degeneracy-preordered roots) over bitset candidate sets;
see _kernels.py for the search itself.  It certifies the optimum; stop_at
and node_budget turn it into an anytime lower-bound search, which is what
the sweep harness uses to mark timeouts instead of hanging.

The edge clique number of an edge (u, v) is 2 plus the clique number of
the subgraph induced on the common neighbourhood of u and v.  Long
spurious edges (inserted between far-apart regions) have small edge
clique numbers compared to genuinely local edges, which is what denoise()
thresholds on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import ArgumentError, NumericError
from .model import GeometricGraph, PerturbedGraph, RegimeParams, _csr_from_pairs, _edges_from_csr

DEFAULT_NODE_BUDGET = 10 ** 9
_NO_STOP = 1 << 40


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: tuple[int, ...]
    nodes: int = 0
    exact: bool = True
    budget_exhausted: bool = False  # exact=False from budget, not stop_at


def as_csr(g) -> tuple[int, np.ndarray, np.ndarray]:
    """Normalise a graph-ish object to (n, indptr, indices) with sorted rows."""
    if hasattr(g, "indptr") and hasattr(g, "indices") and hasattr(g, "n"):
        return int(g.n), np.asarray(g.indptr, dtype=np.int64), np.asarray(g.indices, dtype=np.int32)
    if isinstance(g, np.ndarray) and g.ndim == 2:
        if g.shape[0] != g.shape[1]:
            raise ArgumentError("adjacency matrix must be square")
        a = (g != 0)
        a = a | a.T
        np.fill_diagonal(a, False)
        iu, ju = np.nonzero(np.triu(a, 1))
        return _pairs_to_csr(g.shape[0], iu, ju)
    if isinstance(g, dict):
        n = (max(g.keys()) + 1) if g else 0
        adj = [g.get(i, ()) for i in range(n)]
        return _adj_lists_to_csr(adj)
    if isinstance(g, Sequence):
        return _adj_lists_to_csr(g)
    raise ArgumentError(f"cannot interpret {type(g).__name__} as a graph")


def _pairs_to_csr(n, iu, ju):
    indptr, indices = _csr_from_pairs(n, np.asarray(iu, np.int32), np.asarray(ju, np.int32))
    return n, indptr, indices


def _adj_lists_to_csr(adj):
    n = len(adj)
    pairs = set()
    for i, nbrs in enumerate(adj):
        for j in nbrs:
            j = int(j)
            if j == i:
                continue
            if not (0 <= j < n):
                raise ArgumentError(f"neighbour {j} of {i} out of range")
            pairs.add((min(i, j), max(i, j)))
    if pairs:
        arr = np.array(sorted(pairs), dtype=np.int32)
        return _pairs_to_csr(n, arr[:, 0], arr[:, 1])
    return _pairs_to_csr(n, np.empty(0, np.int32), np.empty(0, np.int32))


def _slot_permutation(n: int, indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """slot_of[v] = bitset position of vertex v (bandwidth-reduced)."""
    if n <= 64 or indices.shape[0] == 0:
        return np.arange(n, dtype=np.int64)
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import reverse_cuthill_mckee

    mat = csr_matrix((np.ones(indices.shape[0], dtype=np.int8), indices, indptr), shape=(n, n))
    order = reverse_cuthill_mckee(mat, symmetric_mode=True).astype(np.int64)
    slot_of = np.empty(n, dtype=np.int64)
    slot_of[order] = np.arange(n, dtype=np.int64)
    return slot_of


def max_clique(g, *, stop_at: Optional[int] = None,
               node_budget: int = DEFAULT_NODE_BUDGET) -> CliqueResult:
    """Certified maximum clique.

    stop_at ends the search as soon as a clique of that size is found (the
    result is then a lower-bound witness, exact=False unless it also
    proved optimality).  node_budget bounds branch nodes; on exhaustion
    the incumbent is returned with exact=False.
    """
    n, indptr, indices = as_csr(g)
    if n == 0:
        return CliqueResult(0, (), 0, True)
    if indices.shape[0] == 0:
        return CliqueResult(1, (0,), 0, True)
    slot_of = _slot_permutation(n, indptr, indices)
    nwords = (n + 63) >> 6
    rows, row_lo, row_hi = _kernels.build_bitset_rows(n, indptr, indices, slot_of, nwords)
    order, _core = _kernels.degeneracy_order(n, indptr, indices)
    root_slots = slot_of[order].astype(np.int64)
    maxcand = int(np.max(np.diff(indptr)))
    stop = _NO_STOP if stop_at is None else int(stop_at)
    best, wit, wit_len, nodes, status = _kernels.max_clique_kernel(
        n, nwords, rows, row_lo, row_hi, root_slots, maxcand,
        stop, int(node_budget))
    orig_of_slot = np.empty(n, dtype=np.int64)
    orig_of_slot[slot_of] = np.arange(n, dtype=np.int64)
    witness = tuple(sorted(int(orig_of_slot[s]) for s in wit[:wit_len]))
    return CliqueResult(int(best), witness, int(nodes), status == 0,
                        status == 2)


def is_clique(g, verts: Iterable[int]) -> bool:
    """True iff the given vertices are pairwise adjacent and distinct."""
    n, indptr, indices = as_csr(g)
    vs = sorted(int(v) for v in verts)
    if len(set(vs)) != len(vs):
        return False
    for v in vs:
        if not (0 <= v < n):
            return False
    for a_i, u in enumerate(vs):
        row = indices[indptr[u]:indptr[u + 1]]
        for v in vs[a_i + 1:]:
            k = np.searchsorted(row, v)
            if k >= row.shape[0] or row[k] != v:
                return False
    return True


def edge_clique_number(g, u: int, v: int, *,
                       node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """2 + clique number of the common-neighbourhood subgraph of edge (u,v)."""
    n, indptr, indices = as_csr(g)
    if not (0 <= u < n and 0 <= v < n) or u == v:
        raise ArgumentError(f"({u}, {v}) is not a vertex pair of the graph")
    row = indices[indptr[u]:indptr[u + 1]]
    k = np.searchsorted(row, v)
    if k >= row.shape[0] or row[k] != v:
        raise ArgumentError(f"({u}, {v}) is not an edge")
    a, b = (u, v) if u < v else (v, u)
    om, st = _kernels.edge_omega_kernel(
        indptr, indices, np.array([a], np.int32), np.array([b], np.int32),
        _NO_STOP, int(node_budget))
    if st[0] == 2:
        raise NumericError("edge_clique_number: node budget exhausted")
    return 2 + int(om[0])


@dataclass
class DenoiseResult:
    graph: PerturbedGraph          # retained edges, labels preserved
    removed_u: np.ndarray
    removed_v: np.ndarray
    threshold: float
    timeouts: int = 0              # edges kept because their proof timed out


def denoise(g, threshold: Union[str, float, int] = "auto",
            regime: Optional[RegimeParams] = None, *,
            node_budget: int = DEFAULT_NODE_BUDGET) -> DenoiseResult:
    """Remove every edge whose edge clique number is below the threshold.

    All edge clique numbers are evaluated on the input adjacency
    (simultaneous removal, not sequential).  threshold='auto' takes half
    of the theory module's lower-bound prediction for the clique number
    under the graph's regime, which needs the regime argument.  Numeric
    thresholds must exceed 2, since every edge has edge clique number
    at least 2.
    """
    if isinstance(g, GeometricGraph):
        from .model import identity_perturbation

        pg = identity_perturbation(g)
    elif isinstance(g, PerturbedGraph):
        pg = g
    else:
        raise ArgumentError("denoise needs a geometric or perturbed graph")

    if isinstance(threshold, str):
        if threshold.lower() != "auto":
            raise ArgumentError(f"threshold must be numeric or 'auto', got {threshold!r}")
        if regime is None:
            raise ArgumentError("auto threshold needs regime metadata")
        from .theory import auto_denoise_threshold

        thr = auto_denoise_threshold(pg, regime)
    else:
        thr = float(threshold)
        if thr <= 2.0:
            raise ArgumentError(f"threshold must exceed 2, got {thr}")

    n, indptr, indices = as_csr(pg)
    eu, ev = pg.edges
    stop_sub = max(0, math.ceil(thr - 2.0))
    om, st = _kernels.edge_omega_kernel(indptr, indices, eu.astype(np.int32),
                                        ev.astype(np.int32), stop_sub,
                                        int(node_budget))
    keep = (st == 1) | (st == 2) | (om >= stop_sub)
    timeouts = int(np.sum(st == 2))
    rm_u, rm_v = eu[~keep].copy(), ev[~keep].copy()

    kept_pairs = set(zip(eu[keep].tolist(), ev[keep].tolist()))
    km = np.fromiter(((int(a), int(b)) in kept_pairs for a, b in
                      zip(pg.kept_u.tolist(), pg.kept_v.tolist())), dtype=bool,
                     count=pg.kept_u.shape[0]) if pg.kept_u.shape[0] else np.zeros(0, bool)
    im = np.fromiter(((int(a), int(b)) in kept_pairs for a, b in
                      zip(pg.ins_u.tolist(), pg.ins_v.tolist())), dtype=bool,
                     count=pg.ins_u.shape[0]) if pg.ins_u.shape[0] else np.zeros(0, bool)
    new_kept_u, new_kept_v = pg.kept_u[km].copy(), pg.kept_v[km].copy()
    new_ins_u, new_ins_v = pg.ins_u[im].copy(), pg.ins_v[im].copy()
    all_u = np.concatenate([new_kept_u, new_ins_u])
    all_v = np.concatenate([new_kept_v, new_ins_v])
    indptr2, indices2 = _csr_from_pairs(n, all_u, all_v)
    out = PerturbedGraph(pg.base, pg.p, pg.q, pg.seed, indptr2, indices2,
                         new_kept_u, new_kept_v, new_ins_u, new_ins_v)
    return DenoiseResult(out, rm_u, rm_v, thr, timeouts)


def max_edge_clique_number(g, edges_u: np.ndarray, edges_v: np.ndarray, *,
                           node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """max over the listed edges of their edge clique number (exact)."""
    if edges_u.shape[0] == 0:
        return 0
    n, indptr, indices = as_csr(g)
    om, st = _kernels.edge_omega_kernel(indptr, indices,
                                        edges_u.astype(np.int32),
                                        edges_v.astype(np.int32),
                                        _NO_STOP, int(node_budget))
    if int(np.sum(st == 2)):
        raise NumericError("max_edge_clique_number: node budget exhausted")
    return 2 + int(om.max())
