"""Numba kernels: CSR assembly and the exact clique branch-and-bound.

The solver is a bitset branch-and-bound with greedy-colouring upper bounds
(MCS/BBMC family).  Vertices are preordered by degeneracy for the root
loop.  Each root's candidate set (its not-yet-processed neighbours) is
compacted into a local index space first, so the branch loop works on
dense cache-resident bitsets of ceil(deg/64) words regardless of n; on
geometric graphs this keeps the per-node cost proportional to the local
neighbourhood size.

Status codes returned by the searches: 0 exact optimum, 1 stopped early at
stop_at (result is a valid lower bound), 2 node budget exhausted (result
is the incumbent, a valid lower bound).
"""
import numpy as np
from numba import njit

U1 = np.uint64(1)
U0 = np.uint64(0)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
FULL = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> U1) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def _ctz(x):
    # index of lowest set bit; undefined for x == 0
    return _popcount((x & (~x + U1)) - U1)


@njit(cache=True)
def fill_csr_rows(eu, ev, indices, fill, indptr):
    for e in range(eu.shape[0]):
        u = eu[e]
        v = ev[e]
        indices[fill[u]] = v
        fill[u] += 1
        indices[fill[v]] = u
        fill[v] += 1
    n = indptr.shape[0] - 1
    for i in range(n):
        a = indptr[i]
        b = indptr[i + 1]
        if b - a > 1:
            indices[a:b].sort()


@njit(cache=True)
def degeneracy_order(n, indptr, indices):
    """Matula–Beck peeling: returns (order, core) with order[k] = k-th peeled."""
    deg = np.empty(n, np.int64)
    maxd = 0
    for i in range(n):
        deg[i] = indptr[i + 1] - indptr[i]
        if deg[i] > maxd:
            maxd = deg[i]
    bin_start = np.zeros(maxd + 2, np.int64)
    for i in range(n):
        bin_start[deg[i] + 1] += 1
    for d_ in range(1, maxd + 2):
        bin_start[d_] += bin_start[d_ - 1]
    nxt = bin_start[:maxd + 1].copy()
    pos = np.empty(n, np.int64)
    vert = np.empty(n, np.int64)
    for i in range(n):
        pos[i] = nxt[deg[i]]
        vert[pos[i]] = i
        nxt[deg[i]] += 1
    core = np.zeros(n, np.int64)
    cur = 0
    for k in range(n):
        v = vert[k]
        if deg[v] > cur:
            cur = deg[v]
        core[v] = cur
        for t in range(indptr[v], indptr[v + 1]):
            u = indices[t]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                    pos[u] = pw
                bin_start[du] += 1
                deg[u] -= 1
    return vert, core


@njit(cache=True)
def build_bitset_rows(n, indptr, indices, slot_of, nwords):
    """Adjacency rows as bitsets in slot space, with per-row word spans."""
    rows = np.zeros((n, nwords), np.uint64)
    lo = np.full(n, nwords, np.int64)
    hi = np.zeros(n, np.int64)
    for v in range(n):
        sv = slot_of[v]
        for t in range(indptr[v], indptr[v + 1]):
            su = slot_of[indices[t]]
            w = su >> 6
            rows[sv, w] |= U1 << np.uint64(su & 63)
            if w < lo[sv]:
                lo[sv] = w
            if w + 1 > hi[sv]:
                hi[sv] = w + 1
    for s in range(n):
        if lo[s] > hi[s]:  # isolated slot
            lo[s] = 0
            hi[s] = 0
    return rows, lo, hi


@njit(cache=True)
def _color_sort(P, plo, phi, rows, row_lo, row_hi, order, colors, tmp, tmp2):
    """Greedy colouring of the candidate bitset P (span [plo, phi)).

    Writes candidates to order/colors sorted by colour ascending; returns
    the candidate count.  tmp/tmp2 are word scratch rows.
    """
    for w in range(plo, phi):
        tmp[w] = P[w]
    cnt = 0
    col = 0
    lo = plo
    while True:
        while lo < phi and tmp[lo] == U0:
            lo += 1
        if lo >= phi:
            break
        col += 1
        for w in range(lo, phi):
            tmp2[w] = tmp[w]
        w = lo
        while w < phi:
            x = tmp2[w]
            if x == U0:
                w += 1
                continue
            b = _ctz(x)
            v = (w << 6) + b
            bit = U1 << np.uint64(b)
            tmp2[w] = x & ~bit
            tmp[w] &= ~bit
            rlo = row_lo[v]
            rhi = row_hi[v]
            a = rlo if rlo > w else w
            for ww in range(a, min(rhi, phi)):
                tmp2[ww] &= ~rows[v, ww]
            order[cnt] = v
            colors[cnt] = col
            cnt += 1
    return cnt


@njit(cache=True)
def _bitset_omega(rows, c, W, row_lo, row_hi, order_st, color_st, P_st,
                  lo_st, hi_st, ptr_st, R_st, tmp, tmp2, wit, init_best,
                  stop_at, node_budget):
    """Exact clique number of the c-vertex graph given as local bitset rows.

    Branches are pruned against init_best, so the caller can seed the
    incumbent it already holds; the returned best is only an improvement
    when it exceeds init_best, and wit[:best] holds the witness exactly in
    that case.  Returns (best, nodes, status).
    """
    best = init_best
    nodes = np.int64(0)
    status = 0
    for s in range(c):
        if best >= stop_at:
            status = 1
            break
        if c - s <= best:
            break
        # candidates: neighbours of s with a higher local index
        plo = W
        phi = 0
        pc = 0
        sw = s >> 6
        sb = np.uint64(s & 63)
        for w in range(sw, W):
            x = rows[s, w]
            if w == sw:
                x &= ~((U1 << sb) - U1) & ~(U1 << sb)
            P_st[0, w] = x
            if x != U0:
                pc += _popcount(x)
                if w < plo:
                    plo = w
                phi = w + 1
        if pc == 0:
            if best < 1:
                best = 1
                wit[0] = s
            continue
        if pc + 1 <= best:
            continue
        R_st[0] = s
        lo_st[0] = plo
        hi_st[0] = phi
        cnt = _color_sort(P_st[0], plo, phi, rows, row_lo, row_hi,
                          order_st[0], color_st[0], tmp, tmp2)
        ptr_st[0] = cnt - 1
        depth = 0
        while depth >= 0:
            i = ptr_st[depth]
            if i < 0:
                depth -= 1
                continue
            if depth + 1 + color_st[depth, i] <= best:
                depth -= 1
                continue
            v = order_st[depth, i]
            ptr_st[depth] = i - 1
            P_st[depth, v >> 6] &= ~(U1 << np.uint64(v & 63))
            nodes += 1
            if nodes >= node_budget:
                return best, nodes, 2
            a2 = lo_st[depth]
            b2 = hi_st[depth]
            clo = W
            chi = 0
            for w in range(a2, b2):
                x = P_st[depth, w] & rows[v, w]
                P_st[depth + 1, w] = x
                if x != U0:
                    if w < clo:
                        clo = w
                    chi = w + 1
            R_st[depth + 1] = v
            if chi == 0:
                if depth + 2 > best:
                    best = depth + 2
                    for k in range(depth + 2):
                        wit[k] = R_st[k]
                    if best >= stop_at:
                        return best, nodes, 1
                continue
            depth += 1
            lo_st[depth] = clo
            hi_st[depth] = chi
            cnt = _color_sort(P_st[depth], clo, chi, rows, row_lo, row_hi,
                              order_st[depth], color_st[depth], tmp, tmp2)
            ptr_st[depth] = cnt - 1
    return best, nodes, status


@njit(cache=True)
def max_clique_kernel(n, nwords, rows, row_lo, row_hi, root_slots,
                      maxcand, stop_at, node_budget):
    """Branch and bound over all roots.  Returns
    (best, witness, wit_len, nodes, status).

    Every root subproblem (neighbours not yet used as roots) is compacted
    to local indices sorted by subproblem degree before branching.
    """
    mc = maxcand if maxcand > 0 else 1
    W_max = (mc + 63) >> 6
    L = mc + 2
    lrows = np.zeros((mc, W_max), np.uint64)
    P_st = np.zeros((L, W_max), np.uint64)
    lo_st = np.zeros(L, np.int64)
    hi_st = np.zeros(L, np.int64)
    order_st = np.zeros((L, mc + 1), np.int32)
    color_st = np.zeros((L, mc + 1), np.int32)
    ptr_st = np.zeros(L, np.int64)
    R_st = np.zeros(L + 1, np.int32)
    tmp = np.zeros(W_max, np.uint64)
    tmp2 = np.zeros(W_max, np.uint64)
    lwit = np.zeros(mc + 2, np.int32)
    cand = np.zeros(mc, np.int64)
    cand2 = np.zeros(mc, np.int64)
    degs = np.zeros(mc, np.int64)
    bins = np.zeros(mc + 2, np.int64)
    loc_of = np.full(n, -1, np.int32)
    row_lo_loc = np.zeros(mc, np.int64)
    row_hi_loc = np.zeros(mc, np.int64)
    Cmask = np.zeros(nwords, np.uint64)
    R_mask = np.zeros(nwords, np.uint64)
    for s in range(n):
        R_mask[s >> 6] |= U1 << np.uint64(s & 63)

    best = 0
    wit = np.zeros(mc + 2, np.int32)
    wit_len = 0
    nodes = np.int64(0)
    status = 0

    for ri in range(n):
        s = root_slots[ri]
        R_mask[s >> 6] &= ~(U1 << np.uint64(s & 63))
        if best >= stop_at:
            status = 1
            break
        if n - ri <= best:
            break
        rlo = row_lo[s]
        rhi = row_hi[s]
        pc = 0
        for w in range(rlo, rhi):
            x = rows[s, w] & R_mask[w]
            Cmask[w] = x
            while x != U0:
                b = _ctz(x)
                x &= x - U1
                cand[pc] = (w << 6) + b
                pc += 1
        if pc == 0:
            if best < 1:
                best = 1
                wit[0] = s
                wit_len = 1
            continue
        if pc + 1 <= best:
            for w in range(rlo, rhi):
                Cmask[w] = U0
            continue
        # local degree of each candidate within the candidate set
        for i in range(pc):
            vi = cand[i]
            a = row_lo[vi] if row_lo[vi] > rlo else rlo
            bnd = row_hi[vi] if row_hi[vi] < rhi else rhi
            dv = np.int64(0)
            for w in range(a, bnd):
                dv += _popcount(rows[vi, w] & Cmask[w])
            degs[i] = dv
        # counting sort, degree ascending, stable: local index of cand[i]
        for d_ in range(pc + 1):
            bins[d_] = 0
        for i in range(pc):
            bins[degs[i]] += 1
        acc = 0
        for d_ in range(pc + 1):
            t_ = bins[d_]
            bins[d_] = acc
            acc += t_
        for i in range(pc):
            j = bins[degs[i]]
            bins[degs[i]] += 1
            cand2[j] = cand[i]
            loc_of[cand[i]] = j
        # compact adjacency rows
        W = (pc + 63) >> 6
        for i in range(pc):
            for w in range(W):
                lrows[i, w] = U0
        for i in range(pc):
            vi = cand2[i]
            a = row_lo[vi] if row_lo[vi] > rlo else rlo
            bnd = row_hi[vi] if row_hi[vi] < rhi else rhi
            for w in range(a, bnd):
                x = rows[vi, w] & Cmask[w]
                while x != U0:
                    b = _ctz(x)
                    x &= x - U1
                    j = loc_of[(w << 6) + b]
                    lrows[i, j >> 6] |= U1 << np.uint64(j & 63)
        for i in range(pc):
            row_lo_loc[i] = 0
            row_hi_loc[i] = W
        lbest, lnodes, lstatus = _bitset_omega(
            lrows, pc, W, row_lo_loc, row_hi_loc, order_st, color_st,
            P_st, lo_st, hi_st, ptr_st, R_st, tmp, tmp2, lwit,
            best - 1, stop_at - 1, node_budget - nodes)
        nodes += lnodes
        if lbest > best - 1:
            best = lbest + 1
            for k in range(lbest):
                wit[k] = np.int32(cand2[lwit[k]])
            wit[lbest] = s
            wit_len = best
        # reset scratch before the next root
        for w in range(rlo, rhi):
            Cmask[w] = U0
        for i in range(pc):
            loc_of[cand2[i]] = -1
        if lstatus == 2:
            status = 2
            break
        if lstatus == 1 or best >= stop_at:
            status = 1
            break
    return best, wit, wit_len, nodes, status


@njit(cache=True)
def _intersect_sorted(a, b, out):
    i = 0
    j = 0
    k = 0
    na = a.shape[0]
    nb = b.shape[0]
    while i < na and j < nb:
        x = a[i]
        y = b[j]
        if x == y:
            out[k] = x
            k += 1
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return k


@njit(cache=True)
def _subgraph_omega(cn, c, indptr, indices, rows, order_st, color_st,
                    P_st, lo_st, hi_st, ptr_st, R_st, tmp, tmp2, wit,
                    row_lo, row_hi, stop_at, node_budget):
    """Exact clique number of the subgraph induced on cn[:c] (sorted ids).

    Work arrays are caller-provided so batch sweeps do not reallocate.
    Early exit at stop_at (status 1).  Returns (omega, nodes, status).
    """
    W = (c + 63) >> 6
    for a in range(c):
        for w in range(W):
            rows[a, w] = U0
    for a in range(c):
        va = cn[a]
        t = indptr[va]
        tend = indptr[va + 1]
        b = a + 1
        while t < tend and b < c:
            x = indices[t]
            y = cn[b]
            if x == y:
                rows[a, b >> 6] |= U1 << np.uint64(b & 63)
                rows[b, a >> 6] |= U1 << np.uint64(a & 63)
                t += 1
                b += 1
            elif x < y:
                t += 1
            else:
                b += 1
    if c == 0:
        return 0, np.int64(0), 0
    for a in range(c):
        row_lo[a] = 0
        row_hi[a] = W
    return _bitset_omega(rows, c, W, row_lo, row_hi, order_st, color_st,
                         P_st, lo_st, hi_st, ptr_st, R_st, tmp, tmp2, wit,
                         0, stop_at, node_budget)


@njit(cache=True)
def edge_omega_kernel(indptr, indices, eu, ev, stop_sub, node_budget):
    """edge clique number minus 2 (= omega of the common neighbourhood)
    for each listed edge, with early exit once a clique of stop_sub common
    vertices is found.  Returns (omega_sub, status) arrays."""
    m = eu.shape[0]
    out = np.zeros(m, np.int64)
    st = np.zeros(m, np.int64)
    maxdeg = 0
    n = indptr.shape[0] - 1
    for v in range(n):
        d_ = indptr[v + 1] - indptr[v]
        if d_ > maxdeg:
            maxdeg = d_
    cn = np.empty(max(maxdeg, 1), np.int32)
    W = (maxdeg + 63) >> 6
    rows = np.zeros((max(maxdeg, 1), max(W, 1)), np.uint64)
    L = maxdeg + 2
    P_st = np.zeros((L, max(W, 1)), np.uint64)
    lo_st = np.zeros(L, np.int64)
    hi_st = np.zeros(L, np.int64)
    order_st = np.zeros((L, maxdeg + 1), np.int32)
    color_st = np.zeros((L, maxdeg + 1), np.int32)
    ptr_st = np.zeros(L, np.int64)
    R_st = np.zeros(L + 1, np.int32)
    tmp = np.zeros(max(W, 1), np.uint64)
    tmp2 = np.zeros(max(W, 1), np.uint64)
    wit = np.zeros(maxdeg + 2, np.int32)
    row_lo = np.zeros(max(maxdeg, 1), np.int64)
    row_hi = np.zeros(max(maxdeg, 1), np.int64)
    for e in range(m):
        u = eu[e]
        v = ev[e]
        c = _intersect_sorted(indices[indptr[u]:indptr[u + 1]],
                              indices[indptr[v]:indptr[v + 1]], cn)
        omega, _, status = _subgraph_omega(
            cn, c, indptr, indices, rows, order_st, color_st,
            P_st, lo_st, hi_st, ptr_st, R_st, tmp, tmp2, wit,
            row_lo, row_hi, stop_sub, node_budget)
        out[e] = omega
        st[e] = status
    return out, st
