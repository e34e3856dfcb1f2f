"""Optimal idle-time insertion and move evaluation by function concatenation.

For a fixed sequence the best start times follow from a forward dynamic
program over convex piecewise-linear functions:

* forward ``F_j(t)``: least cost of positions ``1..j`` with position ``j``
  completing at or before ``t``;
* backward ``B_j(t)``: least cost of positions ``j..n`` with position ``j``
  starting at or after ``t``.

A neighbor is costed by extending a forward function through the relocated
jobs and joining it with a backward function:
``min_t F(t) + B(t + setup)``.
Release dates are hard lower bounds on the domain; setups are fixed gaps.
"""
from __future__ import annotations

from typing import Optional

from .model import Instance, Schedule
from .moves import Move, MoveKind, NeighborhoodType as T, _orientations, apply_to_sequences, touched_machines
from .piecewise import INF, PiecewiseFn

ZERO = PiecewiseFn.constant(0, 0)


def _completion_cost(instance: Instance, j: int, start=0) -> PiecewiseFn:
    return PiecewiseFn.vee(int(instance.d[j]), int(instance.w_early[j]), int(instance.w_tardy[j]), start)


def forward_step(F: PiecewiseFn, prev: int, j: int, k: int, instance: Instance, raw=False):
    """Append job ``j`` (following ``prev``) to a forward function.

    With ``raw`` the un-flattened function of the exact completion time is
    returned as well.
    """
    gap = int(instance.p[j, k]) + instance.setup(k, prev, j)
    lo = max(F.start + gap, int(instance.r[j]) + int(instance.p[j, k]))
    G = F.shifted(-gap).restricted(lo) + _completion_cost(instance, j, lo)
    if raw:
        return G.prefix_min(), G
    return G.prefix_min()


def backward_step(B: Optional[PiecewiseFn], j: int, nxt: int, k: int, instance: Instance) -> PiecewiseFn:
    """Prepend job ``j`` (followed by ``nxt``, or nothing when ``B`` is None)."""
    p = int(instance.p[j, k])
    lo = int(instance.r[j])
    H = _completion_cost(instance, j).shifted(p).restricted(lo)
    if B is not None:
        H = H + B.shifted(p + instance.setup(k, j, nxt))
    return H.suffix_min(floor=0)


def extend(F: PiecewiseFn, prev: int, jobs, k: int, instance: Instance) -> PiecewiseFn:
    for j in jobs:
        F = forward_step(F, prev, j, k, instance)
        prev = j
    return F


def join(F: PiecewiseFn, last: int, B: Optional[PiecewiseFn], first: int, k: int, instance: Instance) -> int:
    """Least total cost of a prefix function followed by a suffix function."""
    if B is None:
        return int(F.cs[-1])
    return int((F + B.shifted(instance.setup(k, last, first))).min_value())


def optimal_timing(seq, k: int, instance: Instance):
    """Start times (aligned with ``seq``, dummy at 0) and the least cost.

    Each job completes at the earliest time compatible with an optimal
    schedule of the remaining decisions.
    """
    F = ZERO
    raws = []
    prev = 0
    for j in seq[1:]:
        F, G = forward_step(F, prev, j, k, instance, raw=True)
        raws.append(G)
        prev = j
    n = len(seq) - 1
    if n == 0:
        return [0], 0
    comps = [0] * (n + 1)
    bound = INF
    for pos in range(n, 0, -1):
        G = raws[pos - 1]
        c = G.first_argmin()
        if c > bound:
            c = bound
        comps[pos] = int(c)
        j = seq[pos]
        bound = c - int(instance.p[j, k]) - instance.setup(k, seq[pos - 1], j)
    starts = [0] + [comps[pos] - int(instance.p[seq[pos], k]) for pos in range(1, n + 1)]
    return starts, int(F.cs[-1])


def build_boundary_fns(seq, k: int, instance: Instance):
    """``forward[0..n]`` and ``backward[1..n+1]`` (``backward[n+1]`` is None,
    ``backward[0]`` unused)."""
    n = len(seq) - 1
    fwd = [ZERO]
    for pos in range(1, n + 1):
        fwd.append(forward_step(fwd[-1], seq[pos - 1], seq[pos], k, instance))
    bwd: list = [None] * (n + 2)
    for pos in range(n, 0, -1):
        nxt = seq[pos + 1] if pos < n else 0
        bwd[pos] = backward_step(bwd[pos + 1], seq[pos], nxt, k, instance)
    return fwd, bwd


def eval_concat(fwd, prefix_end: int, prefix_seq, block, k: int, bwd, suffix_start: int,
                suffix_seq, instance: Instance) -> int:
    """Cost of ``prefix_seq[1..prefix_end] + block + suffix_seq[suffix_start..]``.

    ``fwd``/``bwd`` are boundary functions of ``prefix_seq``/``suffix_seq``
    on machine ``k``.
    """
    F = extend(fwd[prefix_end], prefix_seq[prefix_end], block, k, instance)
    last = block[-1] if len(block) else prefix_seq[prefix_end]
    if suffix_start >= len(suffix_seq):
        return join(F, last, None, 0, k, instance)
    return join(F, last, bwd[suffix_start], suffix_seq[suffix_start], k, instance)


class TimingEvaluator:
    """Move evaluation for variants that may insert idle time."""

    name = "timing"

    def __init__(self, instance: Instance):
        self.instance = instance
        self.seqs: list = []

    def load(self, schedule: Schedule) -> None:
        self.seqs = [list(s) for s in schedule.seqs]
        m = len(self.seqs)
        self._fwd = [None] * m
        self._bwd = [None] * m
        for k in range(m):
            self._refresh(k)

    def _refresh(self, k: int) -> None:
        self._fwd[k], self._bwd[k] = build_boundary_fns(self.seqs[k], k, self.instance)

    def machine_cost(self, k: int) -> int:
        return int(self._fwd[k][-1].cs[-1])

    @property
    def cost(self) -> int:
        return sum(self.machine_cost(k) for k in range(len(self.seqs)))

    def apply(self, move: Move) -> None:
        self.seqs = apply_to_sequences(self.seqs, move)
        for k in touched_machines(move):
            self._refresh(k)

    def schedule(self) -> Schedule:
        starts = [optimal_timing(seq, k, self.instance)[0] for k, seq in enumerate(self.seqs)]
        return Schedule([list(s) for s in self.seqs], starts, self.cost)

    def move_cost(self, move: Move) -> int:
        new = apply_to_sequences(self.seqs, move)
        total = self.cost
        for k in touched_machines(move):
            total += optimal_timing(new[k], k, self.instance)[1] - self.machine_cost(k)
        return total

    # -- scans ------------------------------------------------------------

    def _join_tail(self, F, last, k, pos):
        """Join ``F`` with the original suffix of machine ``k`` from ``pos``."""
        seq = self.seqs[k]
        if pos >= len(seq):
            return join(F, last, None, 0, k, self.instance)
        return join(F, last, self._bwd[k][pos], seq[pos], k, self.instance)

    def _ins_fwd(self, k, l, emit):
        inst, seq, fwd = self.instance, self.seqs[k], self._fwd[k]
        n = len(seq) - 1
        for i in range(1, n - l + 1):
            block = seq[i:i + l]
            E, prev = fwd[i - 1], seq[i - 1]
            for j in range(i + l, n + 1):
                E = forward_step(E, prev, seq[j], k, inst)
                prev = seq[j]
                X = extend(E, prev, block, k, inst)
                emit(MoveKind.INSERT_FWD, i, j, self._join_tail(X, block[-1], k, j + 1))

    def _ins_bwd(self, k, l, emit):
        inst, seq, fwd, bwd = self.instance, self.seqs[k], self._fwd[k], self._bwd[k]
        n = len(seq) - 1
        for i in range(2, n - l + 2):
            block = seq[i:i + l]
            R = bwd[i + l] if i + l <= n else None
            first = seq[i + l] if i + l <= n else 0
            for j in range(i - 2, -1, -1):
                R = backward_step(R, seq[j + 1], first, k, inst)
                first = seq[j + 1]
                X = extend(fwd[j], seq[j], block, k, inst)
                emit(MoveKind.INSERT_BWD, i, j, join(X, block[-1], R, first, k, inst))

    def _swap_intra(self, k, l1, l2, emit):
        inst, seq, fwd = self.instance, self.seqs[k], self._fwd[k]
        n = len(seq) - 1
        for i in range(1, n - l1 - l2 + 2):
            for j in range(i + l1, n - l2 + 2):
                mid = seq[j:j + l2] + seq[i + l1:j] + seq[i:i + l1]
                X = extend(fwd[i - 1], seq[i - 1], mid, k, inst)
                emit(MoveKind.SWAP_INTRA, i, j, self._join_tail(X, mid[-1], k, j + l2))

    def _ins_inter(self, k, k2, l, emit):
        inst = self.instance
        s1, s2 = self.seqs[k], self.seqs[k2]
        f1, f2 = self._fwd[k], self._fwd[k2]
        for i in range(1, len(s1) - l + 1):
            block = s1[i:i + l]
            src = self._join_tail(f1[i - 1], s1[i - 1], k, i + l)
            for j in range(1, len(s2) + 1):
                X = extend(f2[j - 1], s2[j - 1], block, k2, inst)
                emit(MoveKind.INSERT_INTER, i, j, src + self._join_tail(X, block[-1], k2, j))

    def _swap_inter(self, k, k2, l1, l2, emit):
        inst = self.instance
        s1, s2 = self.seqs[k], self.seqs[k2]
        f1, f2 = self._fwd[k], self._fwd[k2]
        for i in range(1, len(s1) - l1 + 1):
            b1 = s1[i:i + l1]
            for j in range(1, len(s2) - l2 + 1):
                b2 = s2[j:j + l2]
                X1 = extend(f1[i - 1], s1[i - 1], b2, k, inst)
                X2 = extend(f2[j - 1], s2[j - 1], b1, k2, inst)
                cost = (self._join_tail(X1, b2[-1], k, i + l1)
                        + self._join_tail(X2, b1[-1], k2, j + l2))
                emit(MoveKind.SWAP_INTER, i, j, cost)

    def scan(self, nbh, record: Optional[list] = None) -> Optional[Move]:
        total = self.cost
        best = None
        m = len(self.seqs)

        def emitter(k, k2, l, l2, base):
            def emit(kind, i, j, c):
                nonlocal best
                mv = Move(base + c, kind, k, k2, i, j, l, l2)
                if record is not None:
                    record.append(mv)
                if best is None or mv < best:
                    best = mv
            return emit

        if nbh.type == T.INSERT_INTRA:
            for k in range(m):
                base = total - self.machine_cost(k)
                self._ins_fwd(k, nbh.l, emitter(k, k, nbh.l, 0, base))
                self._ins_bwd(k, nbh.l, emitter(k, k, nbh.l, 0, base))
        elif nbh.type == T.SWAP_INTRA:
            for l1, l2 in _orientations(nbh.l, nbh.l2):
                for k in range(m):
                    self._swap_intra(k, l1, l2, emitter(k, k, l1, l2, total - self.machine_cost(k)))
        elif nbh.type == T.INSERT_INTER:
            for k in range(m):
                for k2 in range(m):
                    if k != k2:
                        base = total - self.machine_cost(k) - self.machine_cost(k2)
                        self._ins_inter(k, k2, nbh.l, emitter(k, k2, nbh.l, 0, base))
        elif nbh.type == T.SWAP_INTER:
            for l1, l2 in _orientations(nbh.l, nbh.l2):
                for k in range(m):
                    for k2 in range(k + 1, m):
                        base = total - self.machine_cost(k) - self.machine_cost(k2)
                        self._swap_inter(k, k2, l1, l2, emitter(k, k2, l1, l2, base))
        else:
            raise ValueError(f"unknown neighborhood {nbh}")
        if best is not None and best.cost < total:
            return best
        return None
