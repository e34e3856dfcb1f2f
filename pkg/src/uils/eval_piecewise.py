"""Fast move evaluation for problems without setups, release dates or idle time.

Each machine keeps tail-cost functions ``g_j(t)``: the cost of the jobs at
positions ``j..n`` when position ``j`` starts at ``t``. A shifted block is then
costed with two lookups, ``g_i(t) - g_stop(t + p_block)``. Lookups inside a
scan are ordered so that every ``g_j`` is queried at nondecreasing times,
which lets a per-function cursor walk each segment once.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .eval_direct import BIG, DirectEvaluator
from .model import Instance
from .piecewise import PiecewiseFn


# --------------------------------------------------------------------------
# reference (pure Python) API

def penalty_fn(instance: Instance, j: int, k: int) -> PiecewiseFn:
    """Cost of job ``j`` on machine ``k`` as a function of its start time."""
    p = int(instance.p[j, k])
    return PiecewiseFn.vee(int(instance.d[j]) - p, int(instance.w_early[j]), int(instance.w_tardy[j]))


def build_g_tables(seq, k: int, instance: Instance) -> list:
    """``g[j]`` for ``j = 1..n``; ``g[n+1]`` is the zero function."""
    n = len(seq) - 1
    g = [None] * (n + 2)
    g[n + 1] = PiecewiseFn.constant(0)
    for j in range(n, 0, -1):
        rho = penalty_fn(instance, seq[j], k)
        if j == n:
            g[j] = rho
        else:
            g[j] = rho + g[j + 1].shifted(int(instance.p[seq[j], k])).restricted(0)
    return g


def eval_fn_at(fn: PiecewiseFn, t) -> int:
    return fn(t)


def create_processing_list(seq, k_target: int, l: int, instance: Instance) -> list:
    """``(pos, p_block)`` for every block start, largest block first."""
    n = len(seq) - 1
    entries = [(i, int(sum(instance.p[seq[a], k_target] for a in range(i, i + l))))
               for i in range(1, n - l + 2)]
    entries.sort(key=lambda e: (-e[1], e[0]))
    return entries


def block_cost_between(g: list, seq, k: int, i: int, stop: int, t, instance: Instance) -> int:
    """Cost of positions ``i..stop-1`` when position ``i`` starts at ``t``."""
    if i == stop:
        return 0
    total_p = int(sum(instance.p[seq[a], k] for a in range(i, stop)))
    return g[i](t) - g[stop](t + total_p)


# --------------------------------------------------------------------------
# kernels

@njit(cache=True)
def build_g_arrays(seq, n, k, p, d, we, wt):
    """Flat storage of all ``g_j``: segments of ``g_j`` live in ``[gs[j], ge[j])``."""
    cap = (n + 1) * (n + 4) // 2 + 4
    gx = np.empty(cap, dtype=np.int64)
    gc = np.empty(cap, dtype=np.int64)
    ga = np.empty(cap, dtype=np.int64)
    gs = np.zeros(n + 2, dtype=np.int64)
    ge = np.zeros(n + 2, dtype=np.int64)
    hx = np.empty(n + 3, dtype=np.int64)
    hc = np.empty(n + 3, dtype=np.int64)
    ha = np.empty(n + 3, dtype=np.int64)
    rx = np.zeros(2, dtype=np.int64)
    rc = np.zeros(2, dtype=np.int64)
    ra = np.zeros(2, dtype=np.int64)
    w = 0
    for j in range(n, 0, -1):
        job = seq[j]
        pj = p[job, k]
        # h(t) = g_{j+1}(t + pj) on [0, inf)
        if j == n:
            hx[0] = 0
            hc[0] = 0
            ha[0] = 0
            nh = 1
        else:
            q = gs[j + 1]
            b = ge[j + 1]
            while q + 1 < b and gx[q + 1] - pj <= 0:
                q += 1
            hx[0] = 0
            hc[0] = gc[q] + ga[q] * (pj - gx[q])
            ha[0] = ga[q]
            nh = 1
            for qq in range(q + 1, b):
                hx[nh] = gx[qq] - pj
                hc[nh] = gc[qq]
                ha[nh] = ga[qq]
                nh += 1
        kink = d[job] - pj
        if kink > 0:
            rx[0] = 0
            rc[0] = we[job] * kink
            ra[0] = -we[job]
            rx[1] = kink
            rc[1] = 0
            ra[1] = wt[job]
            nr = 2
        else:
            rx[0] = 0
            rc[0] = -wt[job] * kink
            ra[0] = wt[job]
            nr = 1
        gs[j] = w
        a = 0
        q = 0
        while True:
            x = rx[a] if rx[a] >= hx[q] else hx[q]
            sl = ra[a] + ha[q]
            if w == gs[j] or ga[w - 1] != sl:
                gx[w] = x
                gc[w] = rc[a] + ra[a] * (x - rx[a]) + hc[q] + ha[q] * (x - hx[q])
                ga[w] = sl
                w += 1
            an = rx[a + 1] if a + 1 < nr else BIG
            bn = hx[q + 1] if q + 1 < nh else BIG
            if an == BIG and bn == BIG:
                break
            if an <= bn:
                a += 1
            if bn <= an:
                q += 1
        ge[j] = w
    return gx, gc, ga, gs, ge


@njit(cache=True)
def gval(gx, gc, ga, gs, ge, cur, j, t):
    a = gs[j]
    b = ge[j]
    if a == b:
        return 0
    q = cur[j]
    while q + 1 < b and gx[q + 1] <= t:
        q += 1
    while q > a and gx[q] > t:
        q -= 1
    cur[j] = q
    return gc[q] + ga[q] * (t - gx[q])


@njit(cache=True)
def processing_list(seq, n, k, l, p):
    cnt = n - l + 1
    if cnt <= 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    pos = np.arange(1, cnt + 1).astype(np.int64)
    tot = np.zeros(cnt, dtype=np.int64)
    acc = 0
    for a in range(1, l + 1):
        acc += p[seq[a], k]
    tot[0] = acc
    for i in range(2, cnt + 1):
        acc += p[seq[i + l - 1], k] - p[seq[i - 1], k]
        tot[i - 1] = acc
    order = np.argsort(-tot, kind="mergesort")
    return pos[order], tot[order]


@njit(cache=True)
def _block(seq, a, b, k, c, p, d, we, wt):
    cost = 0
    for pos in range(a, b + 1):
        j = seq[pos]
        c += p[j, k]
        dj = d[j]
        if c > dj:
            cost += wt[j] * (c - dj)
        else:
            cost += we[j] * (dj - c)
    return cost


@njit(cache=True)
def _better(cost, i, j, best, bi, bj):
    if cost != best:
        return cost < best
    return i < bi or (i == bi and j < bj)


@njit(cache=True)
def fast_insert_fwd(seq, n, k, l, C, W, gx, gc, ga, gs, ge, p, d, we, wt, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = BIG
    bj = BIG
    cnt = 0
    pos, tot = processing_list(seq, n, k, l, p)
    curA = gs.copy()
    curB = gs.copy()
    # descending block length: C[j] - pB grows for every g_{j+1}
    for e in range(pos.shape[0]):
        i = pos[e]
        if i > n - l:
            continue
        pb = tot[e]
        head = W[i - 1] + gval(gx, gc, ga, gs, ge, curA, i + l, C[i - 1])
        for j in range(i + l, n + 1):
            t2 = C[j] - pb
            cost = (head - gval(gx, gc, ga, gs, ge, curB, j + 1, t2)
                    + _block(seq, i, i + l - 1, k, t2, p, d, we, wt) + W[n] - W[j])
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if _better(cost, i, j, best, bi, bj):
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def fast_insert_bwd(seq, n, k, l, C, W, gx, gc, ga, gs, ge, p, d, we, wt, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = BIG
    bj = BIG
    cnt = 0
    pos, tot = processing_list(seq, n, k, l, p)
    curA = gs.copy()
    curB = gs.copy()
    for e in range(pos.shape[0] - 1, -1, -1):
        i = pos[e]
        if i < 2:
            continue
        pb = tot[e]
        tail = gval(gx, gc, ga, gs, ge, curA, i, C[i - 1] + pb) - W[n] + W[i + l - 1]
        for j in range(0, i - 1):
            cost = (W[j] + _block(seq, i, i + l - 1, k, C[j], p, d, we, wt)
                    + gval(gx, gc, ga, gs, ge, curB, j + 1, C[j] + pb) - tail)
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if _better(cost, i, j, best, bi, bj):
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def fast_swap_intra(seq, n, k, l1, l2, C, W, gx, gc, ga, gs, ge, p, d, we, wt, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = BIG
    bj = BIG
    cnt = 0
    pos1, tot1 = processing_list(seq, n, k, l1, p)
    pos2, tot2 = processing_list(seq, n, k, l2, p)
    curA = gs.copy()
    curB = gs.copy()
    for e1 in range(pos1.shape[0]):
        i = pos1[e1]
        if i > n - l1 - l2 + 1:
            continue
        pb2 = tot1[e1]
        for e2 in range(pos2.shape[0] - 1, -1, -1):
            j = pos2[e2]
            if j < i + l1:
                continue
            pb4 = tot2[e2]
            c0 = C[i - 1]
            t5 = C[j + l2 - 1] - pb2
            cost = W[i - 1] + _block(seq, j, j + l2 - 1, k, c0, p, d, we, wt)
            if j > i + l1:
                cost += (gval(gx, gc, ga, gs, ge, curA, i + l1, c0 + pb4)
                         - gval(gx, gc, ga, gs, ge, curB, j, t5))
            cost += _block(seq, i, i + l1 - 1, k, t5, p, d, we, wt) + W[n] - W[j + l2 - 1]
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if _better(cost, i, j, best, bi, bj):
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def fast_insert_inter(seq1, n1, k1, C1, W1, gx1, gc1, ga1, gs1, ge1,
                      seq2, n2, k2, C2, W2, gx2, gc2, ga2, gs2, ge2, l, p, d, we, wt, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = BIG
    bj = BIG
    cnt = 0
    pos, tot = processing_list(seq1, n1, k2, l, p)
    cur1 = gs1.copy()
    cur2 = gs2.copy()
    for e in range(pos.shape[0] - 1, -1, -1):
        i = pos[e]
        pb = tot[e]
        src = W1[i - 1] + gval(gx1, gc1, ga1, gs1, ge1, cur1, i + l, C1[i - 1])
        for j in range(1, n2 + 2):
            t = C2[j - 1]
            cost = (src + W2[j - 1] + _block(seq1, i, i + l - 1, k2, t, p, d, we, wt)
                    + gval(gx2, gc2, ga2, gs2, ge2, cur2, j, t + pb))
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if _better(cost, i, j, best, bi, bj):
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def fast_swap_inter(seq1, n1, k1, C1, W1, gx1, gc1, ga1, gs1, ge1,
                    seq2, n2, k2, C2, W2, gx2, gc2, ga2, gs2, ge2, l1, l2, p, d, we, wt, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = BIG
    bj = BIG
    cnt = 0
    # block from k1 measured on k2 and vice versa: each runs where it lands
    pos1, tot1 = processing_list(seq1, n1, k2, l1, p)
    pos2, tot2 = processing_list(seq2, n2, k1, l2, p)
    cur1 = gs1.copy()
    cur2 = gs2.copy()
    for e1 in range(pos1.shape[0] - 1, -1, -1):
        i = pos1[e1]
        pb2 = tot1[e1]
        c1 = C1[i - 1]
        for e2 in range(pos2.shape[0] - 1, -1, -1):
            j = pos2[e2]
            pb5 = tot2[e2]
            c2 = C2[j - 1]
            cost = (W1[i - 1] + _block(seq2, j, j + l2 - 1, k1, c1, p, d, we, wt)
                    + gval(gx1, gc1, ga1, gs1, ge1, cur1, i + l1, c1 + pb5)
                    + W2[j - 1] + _block(seq1, i, i + l1 - 1, k2, c2, p, d, we, wt)
                    + gval(gx2, gc2, ga2, gs2, ge2, cur2, j + l2, c2 + pb2))
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if _better(cost, i, j, best, bi, bj):
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


# --------------------------------------------------------------------------

class PiecewiseEvaluator(DirectEvaluator):
    """Scans driven by g-function lookups; same interface as the direct engine."""

    name = "piecewise"

    def __init__(self, instance: Instance):
        f = instance.flags
        if f.has_setups or f.has_release_dates or (f.idle_allowed and f.has_earliness):
            raise ValueError("piecewise evaluation needs no setups, no release dates and no idle time")
        super().__init__(instance)
        self._pdw = (instance.p, instance.d, instance.w_early, instance.w_tardy)

    def _refresh(self, k: int) -> None:
        super()._refresh(k)
        arr = self._arr[k]
        self._g[k] = build_g_arrays(arr, len(arr) - 1, k, *self._pdw)

    def _reset_caches(self, m: int) -> None:
        super()._reset_caches(m)
        self._g = [None] * m

    def _ins_fwd(self, k, l, out):
        return fast_insert_fwd(self._arr[k], len(self._arr[k]) - 1, k, l, self._C[k], self._W[k],
                               *self._g[k], *self._pdw, out)

    def _ins_bwd(self, k, l, out):
        return fast_insert_bwd(self._arr[k], len(self._arr[k]) - 1, k, l, self._C[k], self._W[k],
                               *self._g[k], *self._pdw, out)

    def _swap_intra(self, k, l1, l2, out):
        return fast_swap_intra(self._arr[k], len(self._arr[k]) - 1, k, l1, l2, self._C[k], self._W[k],
                               *self._g[k], *self._pdw, out)

    def _ins_inter(self, k, k2, l, out):
        return fast_insert_inter(self._arr[k], len(self._arr[k]) - 1, k, self._C[k], self._W[k], *self._g[k],
                                 self._arr[k2], len(self._arr[k2]) - 1, k2, self._C[k2], self._W[k2],
                                 *self._g[k2], l, *self._pdw, out)

    def _swap_inter(self, k, k2, l1, l2, out):
        return fast_swap_inter(self._arr[k], len(self._arr[k]) - 1, k, self._C[k], self._W[k], *self._g[k],
                               self._arr[k2], len(self._arr[k2]) - 1, k2, self._C[k2], self._W[k2],
                               *self._g[k2], l1, l2, *self._pdw, out)
