"""Straightforward move evaluation for problems without idle time.

A move is costed by keeping the untouched prefix of every affected machine
(``W`` lookup), re-chaining each block whose completion times shift, and
re-costing the tail until its completion times line up with the stored
ones again. Works with setups and with release dates (a job never starts
before its release date; the wait is not an idle-policy decision).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .model import Instance
from .moves import Move, MoveKind, apply_to_sequences, touched_machines

BIG = np.int64(2**62)
_EMPTY_OUT = np.zeros((0, 3), dtype=np.int64)


@dataclass
class PrefixCosts:
    W: np.ndarray
    C: np.ndarray


def instance_arrays(instance: Instance) -> tuple:
    """Arrays in the order the kernels expect: ``p, d, r, we, wt, s, use_s``."""
    s = instance.s if instance.s is not None else np.zeros((1, 1, 1), dtype=np.int64)
    return (instance.p, instance.d, instance.r, instance.w_early, instance.w_tardy,
            s, instance.s is not None)


# --------------------------------------------------------------------------
# kernels

@njit(cache=True)
def _jc(j, c, d, we, wt):
    dj = d[j]
    if c > dj:
        return wt[j] * (c - dj)
    return we[j] * (dj - c)


@njit(cache=True)
def chain_cost(seq, a, b, k, prev, c_prev, p, d, r, we, wt, s, use_s):
    """Cost and final completion of positions ``a..b`` of ``seq`` run on
    machine ``k`` right after job ``prev`` completing at ``c_prev``."""
    cost = 0
    c = c_prev
    for pos in range(a, b + 1):
        j = seq[pos]
        st = c + s[k, prev, j] if use_s else c
        if st < r[j]:
            st = r[j]
        c = st + p[j, k]
        cost += _jc(j, c, d, we, wt)
        prev = j
    return cost, c


@njit(cache=True)
def tail_cost(seq, a, n, k, prev, c_prev, C, W, p, d, r, we, wt, s, use_s):
    # positions a..n keep their original jobs; once a completion time matches
    # the stored one, the rest of the sequence is unchanged
    cost = 0
    c = c_prev
    for pos in range(a, n + 1):
        j = seq[pos]
        st = c + s[k, prev, j] if use_s else c
        if st < r[j]:
            st = r[j]
        c = st + p[j, k]
        if c == C[pos]:
            return cost + W[n] - W[pos - 1]
        cost += _jc(j, c, d, we, wt)
        prev = j
    return cost


@njit(cache=True)
def prefix_arrays(seq, n, k, p, d, r, we, wt, s, use_s):
    C = np.zeros(n + 1, dtype=np.int64)
    W = np.zeros(n + 1, dtype=np.int64)
    c = 0
    prev = 0
    for pos in range(1, n + 1):
        j = seq[pos]
        st = c + s[k, prev, j] if use_s else c
        if st < r[j]:
            st = r[j]
        c = st + p[j, k]
        C[pos] = c
        W[pos] = W[pos - 1] + _jc(j, c, d, we, wt)
        prev = j
    return C, W


@njit(cache=True)
def scan_insert_fwd(seq, n, k, l, C, W, p, d, r, we, wt, s, use_s, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = -1
    bj = -1
    cnt = 0
    for i in range(1, n - l + 1):
        for j in range(i + l, n + 1):
            c3, e = chain_cost(seq, i + l, j, k, seq[i - 1], C[i - 1], p, d, r, we, wt, s, use_s)
            c2, e = chain_cost(seq, i, i + l - 1, k, seq[j], e, p, d, r, we, wt, s, use_s)
            ct = tail_cost(seq, j + 1, n, k, seq[i + l - 1], e, C, W, p, d, r, we, wt, s, use_s)
            cost = W[i - 1] + c3 + c2 + ct
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if cost < best:
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def scan_insert_bwd(seq, n, k, l, C, W, p, d, r, we, wt, s, use_s, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = -1
    bj = -1
    cnt = 0
    for i in range(2, n - l + 2):
        for j in range(0, i - 1):
            c2, e = chain_cost(seq, i, i + l - 1, k, seq[j], C[j], p, d, r, we, wt, s, use_s)
            c3, e = chain_cost(seq, j + 1, i - 1, k, seq[i + l - 1], e, p, d, r, we, wt, s, use_s)
            ct = tail_cost(seq, i + l, n, k, seq[i - 1], e, C, W, p, d, r, we, wt, s, use_s)
            cost = W[j] + c2 + c3 + ct
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if cost < best:
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def scan_swap_intra(seq, n, k, l1, l2, C, W, p, d, r, we, wt, s, use_s, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = -1
    bj = -1
    cnt = 0
    for i in range(1, n - l1 - l2 + 2):
        for j in range(i + l1, n - l2 + 2):
            c4, e = chain_cost(seq, j, j + l2 - 1, k, seq[i - 1], C[i - 1], p, d, r, we, wt, s, use_s)
            c3, e = chain_cost(seq, i + l1, j - 1, k, seq[j + l2 - 1], e, p, d, r, we, wt, s, use_s)
            prev = seq[j - 1] if j > i + l1 else seq[j + l2 - 1]
            c2, e = chain_cost(seq, i, i + l1 - 1, k, prev, e, p, d, r, we, wt, s, use_s)
            ct = tail_cost(seq, j + l2, n, k, seq[i + l1 - 1], e, C, W, p, d, r, we, wt, s, use_s)
            cost = W[i - 1] + c4 + c3 + c2 + ct
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if cost < best:
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def scan_insert_inter(seq1, n1, k1, C1, W1, seq2, n2, k2, C2, W2, l, p, d, r, we, wt, s, use_s, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = -1
    bj = -1
    cnt = 0
    for i in range(1, n1 - l + 2):
        src = W1[i - 1] + tail_cost(seq1, i + l, n1, k1, seq1[i - 1], C1[i - 1], C1, W1,
                                    p, d, r, we, wt, s, use_s)
        for j in range(1, n2 + 2):
            c2, e = chain_cost(seq1, i, i + l - 1, k2, seq2[j - 1], C2[j - 1], p, d, r, we, wt, s, use_s)
            ct = tail_cost(seq2, j, n2, k2, seq1[i + l - 1], e, C2, W2, p, d, r, we, wt, s, use_s)
            cost = src + W2[j - 1] + c2 + ct
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if cost < best:
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


@njit(cache=True)
def scan_swap_inter(seq1, n1, k1, C1, W1, seq2, n2, k2, C2, W2, l1, l2, p, d, r, we, wt, s, use_s, out):
    rec = out.shape[0] > 0
    best = BIG
    bi = -1
    bj = -1
    cnt = 0
    for i in range(1, n1 - l1 + 2):
        for j in range(1, n2 - l2 + 2):
            c5, e = chain_cost(seq2, j, j + l2 - 1, k1, seq1[i - 1], C1[i - 1], p, d, r, we, wt, s, use_s)
            t1 = tail_cost(seq1, i + l1, n1, k1, seq2[j + l2 - 1], e, C1, W1, p, d, r, we, wt, s, use_s)
            c2, e = chain_cost(seq1, i, i + l1 - 1, k2, seq2[j - 1], C2[j - 1], p, d, r, we, wt, s, use_s)
            t2 = tail_cost(seq2, j + l2, n2, k2, seq1[i + l1 - 1], e, C2, W2, p, d, r, we, wt, s, use_s)
            cost = W1[i - 1] + c5 + t1 + W2[j - 1] + c2 + t2
            if rec:
                out[cnt, 0] = i
                out[cnt, 1] = j
                out[cnt, 2] = cost
            cnt += 1
            if cost < best:
                best = cost
                bi = i
                bj = j
    return best, bi, bj, cnt


# --------------------------------------------------------------------------
# Python-level operations

def prefix_costs(seq, k: int, instance: Instance) -> PrefixCosts:
    """Completion times ``C`` and cumulated costs ``W`` of one machine sequence."""
    arr = np.asarray(seq, dtype=np.int64)
    C, W = prefix_arrays(arr, len(arr) - 1, k, *instance_arrays(instance))
    return PrefixCosts(W=W, C=C)


def comp_cost_block(b_prev: int, a: int, b: int, seq, k: int, c_prev: int, instance: Instance) -> int:
    """Cost of positions ``a..b`` of ``seq`` chained after position ``b_prev``
    whose job completes at ``c_prev``; an empty block (``a > b``) costs 0."""
    if a > b:
        return 0
    arr = np.asarray(seq, dtype=np.int64)
    if not (0 <= b_prev < len(arr) and 1 <= a <= b < len(arr)):
        raise IndexError(f"block ({b_prev}; {a}..{b}) out of range for a sequence of {len(arr) - 1} jobs")
    cost, _ = chain_cost(arr, a, b, k, arr[b_prev], c_prev, *instance_arrays(instance))
    return int(cost)


def _recost_machine(old, new, k, pc: PrefixCosts, arrays) -> int:
    """Cost of ``new`` given prefix data of ``old`` on the same machine."""
    n_old, n_new = len(old) - 1, len(new) - 1
    a = 1
    while a <= min(n_old, n_new) and old[a] == new[a]:
        a += 1
    if a > n_new:
        return int(pc.W[n_new])
    # longest common tail
    t = 0
    while t < n_new - a + 1 and t < n_old - a + 1 and old[n_old - t] == new[n_new - t]:
        t += 1
    new_arr = np.asarray(new, dtype=np.int64)
    mid_end = n_new - t
    cost, c = chain_cost(new_arr, a, mid_end, k, new_arr[a - 1], pc.C[a - 1], *arrays)
    cost = int(pc.W[a - 1]) + int(cost)
    if t:
        old_arr = np.asarray(old, dtype=np.int64)
        cost += int(tail_cost(old_arr, n_old - t + 1, n_old, k, new_arr[mid_end], c, pc.C, pc.W, *arrays))
    return cost


def direct_move_cost(move: Move, seqs: list, prefixes: list, instance: Instance) -> int:
    """Total objective after ``move``, assembled from prefix lookups plus
    re-chained blocks. ``prefixes[k]`` must describe ``seqs[k]``."""
    _check_move(move, seqs)
    arrays = instance_arrays(instance)
    new = apply_to_sequences(seqs, move)
    total = sum(int(pc.W[-1]) for pc in prefixes)
    for k in touched_machines(move):
        total += _recost_machine(seqs[k], new[k], k, prefixes[k], arrays) - int(prefixes[k].W[-1])
    return total


def _check_move(move: Move, seqs: list) -> None:
    n = len(seqs[move.k]) - 1
    i, j, l, l2 = move.i, move.j, move.l, move.l2
    ok = l >= 1 and i >= 1
    if move.kind == MoveKind.INSERT_FWD:
        ok = ok and i + l <= j <= n
    elif move.kind == MoveKind.INSERT_BWD:
        ok = ok and 0 <= j <= i - 2 and i + l - 1 <= n
    elif move.kind == MoveKind.SWAP_INTRA:
        ok = ok and l2 >= 1 and i + l <= j and j + l2 - 1 <= n
    elif move.kind == MoveKind.INSERT_INTER:
        ok = ok and move.k != move.k2 and i + l - 1 <= n and 1 <= j <= len(seqs[move.k2])
    elif move.kind == MoveKind.SWAP_INTER:
        ok = (ok and l2 >= 1 and move.k != move.k2 and i + l - 1 <= n
              and 1 <= j and j + l2 - 1 <= len(seqs[move.k2]) - 1)
    if not ok:
        raise ValueError(f"illegal move {move} (blocks overlap, leave the sequence or touch the dummy)")


# --------------------------------------------------------------------------

class DirectEvaluator:
    """Move-evaluation engine for schedules without inserted idle time.

    Holds the current sequences plus per-machine prefix data. ``scan``
    returns the best strictly improving move of a neighborhood (or ``None``);
    ``apply`` commits a move and refreshes the touched machines only.
    """

    name = "direct"

    def __init__(self, instance: Instance):
        self.instance = instance
        self._arrays = instance_arrays(instance)
        self.seqs: list = []

    # -- state ------------------------------------------------------------

    def _reset_caches(self, m: int) -> None:
        self._arr = [None] * m
        self._C = [None] * m
        self._W = [None] * m

    def _refresh(self, k: int) -> None:
        arr = np.asarray(self.seqs[k], dtype=np.int64)
        self._arr[k] = arr
        self._C[k], self._W[k] = prefix_arrays(arr, len(arr) - 1, k, *self._arrays)

    def load(self, schedule) -> None:
        self.seqs = [list(s) for s in schedule.seqs]
        self._reset_caches(len(self.seqs))
        for k in range(len(self.seqs)):
            self._refresh(k)

    def machine_cost(self, k: int) -> int:
        return int(self._W[k][-1])

    @property
    def cost(self) -> int:
        return sum(self.machine_cost(k) for k in range(len(self.seqs)))

    def apply(self, move: Move) -> None:
        self.seqs = apply_to_sequences(self.seqs, move)
        for k in touched_machines(move):
            self._refresh(k)

    def schedule(self):
        from .model import Schedule
        starts = None
        if self.instance.idle_allowed:
            # without earliness, starting as early as possible is optimal
            starts = [[int(c - self.instance.p[j, k]) for j, c in zip(seq, self._C[k])]
                      for k, seq in enumerate(self.seqs)]
            for st in starts:
                st[0] = 0
        return Schedule([list(s) for s in self.seqs], starts, self.cost)

    def prefixes(self) -> list:
        return [PrefixCosts(W=self._W[k], C=self._C[k]) for k in range(len(self.seqs))]

    def move_cost(self, move: Move) -> int:
        return direct_move_cost(move, self.seqs, self.prefixes(), self.instance)

    # -- kernels (overridden by faster engines) ---------------------------

    def _ins_fwd(self, k, l, out):
        return scan_insert_fwd(self._arr[k], len(self._arr[k]) - 1, k, l, self._C[k], self._W[k],
                               *self._arrays, out)

    def _ins_bwd(self, k, l, out):
        return scan_insert_bwd(self._arr[k], len(self._arr[k]) - 1, k, l, self._C[k], self._W[k],
                               *self._arrays, out)

    def _swap_intra(self, k, l1, l2, out):
        return scan_swap_intra(self._arr[k], len(self._arr[k]) - 1, k, l1, l2, self._C[k], self._W[k],
                               *self._arrays, out)

    def _ins_inter(self, k, k2, l, out):
        return scan_insert_inter(self._arr[k], len(self._arr[k]) - 1, k, self._C[k], self._W[k],
                                 self._arr[k2], len(self._arr[k2]) - 1, k2, self._C[k2], self._W[k2],
                                 l, *self._arrays, out)

    def _swap_inter(self, k, k2, l1, l2, out):
        return scan_swap_inter(self._arr[k], len(self._arr[k]) - 1, k, self._C[k], self._W[k],
                               self._arr[k2], len(self._arr[k2]) - 1, k2, self._C[k2], self._W[k2],
                               l1, l2, *self._arrays, out)

    # -- scanning ---------------------------------------------------------

    def scan(self, nbh, record: Optional[list] = None) -> Optional[Move]:
        """Best strictly improving move of ``nbh``.

        When ``record`` is a list, every evaluated move is appended to it
        with its resulting total cost.
        """
        from .moves import NeighborhoodType as T, _orientations

        total = self.cost
        best = None
        m = len(self.seqs)
        sizes = [len(s) - 1 for s in self.seqs]

        def run(fn, args, kind, k, k2, l, l2, cap, base):
            nonlocal best
            out = np.zeros((cap, 3), dtype=np.int64) if record is not None else _EMPTY_OUT
            val, bi, bj, cnt = fn(*args, out)
            if record is not None:
                for i, j, c in out[:cnt].tolist():
                    record.append(Move(base + c, kind, k, k2, i, j, l, l2))
            if cnt:
                mv = Move(base + int(val), kind, k, k2, int(bi), int(bj), l, l2)
                if best is None or mv < best:
                    best = mv

        if nbh.type == T.INSERT_INTRA:
            l = nbh.l
            for k in range(m):
                n = sizes[k]
                if n <= l:
                    continue
                base = total - self.machine_cost(k)
                run(self._ins_fwd, (k, l), MoveKind.INSERT_FWD, k, k, l, 0, n * n, base)
                run(self._ins_bwd, (k, l), MoveKind.INSERT_BWD, k, k, l, 0, n * n, base)
        elif nbh.type == T.SWAP_INTRA:
            for l1, l2 in _orientations(nbh.l, nbh.l2):
                for k in range(m):
                    n = sizes[k]
                    if n < l1 + l2:
                        continue
                    base = total - self.machine_cost(k)
                    run(self._swap_intra, (k, l1, l2), MoveKind.SWAP_INTRA, k, k, l1, l2, n * n, base)
        elif nbh.type == T.INSERT_INTER:
            l = nbh.l
            for k in range(m):
                if sizes[k] < l:
                    continue
                for k2 in range(m):
                    if k2 == k:
                        continue
                    base = total - self.machine_cost(k) - self.machine_cost(k2)
                    cap = (sizes[k] + 1) * (sizes[k2] + 1)
                    run(self._ins_inter, (k, k2, l), MoveKind.INSERT_INTER, k, k2, l, 0, cap, base)
        elif nbh.type == T.SWAP_INTER:
            for l1, l2 in _orientations(nbh.l, nbh.l2):
                for k in range(m):
                    if sizes[k] < l1:
                        continue
                    for k2 in range(k + 1, m):
                        if sizes[k2] < l2:
                            continue
                        base = total - self.machine_cost(k) - self.machine_cost(k2)
                        cap = (sizes[k] + 1) * (sizes[k2] + 1)
                        run(self._swap_inter, (k, k2, l1, l2), MoveKind.SWAP_INTER, k, k2, l1, l2, cap, base)
        else:
            raise ValueError(f"unknown neighborhood {nbh}")
        if best is not None and best.cost < total:
            return best
        return None
