"""Brute-force references used by the tests and the ``verify`` command.

Nothing here shares code with the search engines beyond the instance model:
idle timing uses a dense integer-time dynamic program rather than
piecewise-linear functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import Instance, Schedule, solution_cost
from .moves import Move, apply_to_sequences, legal_moves


class OracleSizeError(ValueError):
    """Raised when an instance is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class OracleLimits:
    max_jobs: int = 8
    max_horizon: int = 60


def safe_horizon(instance: Instance) -> int:
    """A completion-time bound that no optimal idle schedule exceeds."""
    smax = 0 if instance.s is None else int(instance.s.max())
    work = int(instance.p.max(axis=1).sum()) + smax * instance.n
    return max(int(instance.d.max()), int(instance.r.max())) + work + 1


def _cost_table(instance: Instance, H: int) -> np.ndarray:
    """``tab[j, t]``: cost of job ``j`` completing at ``t``."""
    t = np.arange(H + 1)
    d = instance.d[:, None]
    return np.where(t > d, instance.w_tardy[:, None] * (t - d), instance.w_early[:, None] * (d - t))


def _dense_step(F, tab, instance, prev, j, k, H):
    """Dense forward step: ``F[t]`` is the least cost with the last job done by ``t``."""
    gap = int(instance.p[j, k]) + instance.setup(k, prev, j)
    lo = int(instance.r[j]) + int(instance.p[j, k])
    G = np.full(H + 1, np.inf)
    if gap <= H:
        G[gap:] = F[:H + 1 - gap]
    G[:lo] = np.inf
    G += tab[j]
    return np.minimum.accumulate(G)


def dense_timing_cost(seq, k: int, instance: Instance, horizon=None) -> int:
    H = safe_horizon(instance) if horizon is None else horizon
    tab = _cost_table(instance, H)
    F = np.zeros(H + 1)
    prev = 0
    for j in seq[1:]:
        F = _dense_step(F, tab, instance, prev, j, k, H)
        prev = j
    return int(F[-1])


def grid_timing(seq, k: int, instance: Instance, horizon: int) -> int:
    """Least cost over all integer start vectors with every start ``<= horizon``."""
    jobs = list(seq[1:])
    if len(jobs) > 6:
        raise OracleSizeError("grid timing supports at most 6 jobs")
    # the as-soon-as-possible schedule must fit
    ready, prev = 0, 0
    for j in jobs:
        st = max(ready + instance.setup(k, prev, j), int(instance.r[j]))
        if st > horizon:
            raise ValueError(f"horizon {horizon} too small for the sequence")
        ready, prev = st + int(instance.p[j, k]), j
    p = [int(instance.p[j, k]) for j in jobs]
    r = [int(instance.r[j]) for j in jobs]

    @lru_cache(maxsize=None)
    def best(pos: int, ready: int, prev: int) -> float:
        if pos == len(jobs):
            return 0
        j = jobs[pos]
        out = float("inf")
        for st in range(max(ready + instance.setup(k, prev, j), r[pos]), horizon + 1):
            c = st + p[pos]
            v = _job_cost(instance, j, c) + best(pos + 1, c, j)
            if v < out:
                out = v
        return out

    return int(best(0, 0, 0))


def _job_cost(instance, j, c):
    d = int(instance.d[j])
    return int(instance.w_tardy[j]) * (c - d) if c > d else int(instance.w_early[j]) * (d - c)


def _machine_tables(instance: Instance, k: int):
    """Best cost and sequence for every job subset on machine ``k``."""
    n = instance.n
    size = 1 << n
    best = np.full(size, np.iinfo(np.int64).max, dtype=np.int64)
    arg = [None] * size
    idle = instance.idle_allowed
    if idle:
        H = safe_horizon(instance)
        tab = _cost_table(instance, H)
    p, r = instance.p, instance.r

    def visit(mask, seq, state, prev):
        # state: (completion, cost) without idle, dense function with idle
        cost = int(state[-1]) if idle else state[1]
        if cost < best[mask]:
            best[mask] = cost
            arg[mask] = list(seq)
        for j in range(1, n + 1):
            bit = 1 << (j - 1)
            if mask & bit:
                continue
            if idle:
                nxt = _dense_step(state, tab, instance, prev, j, k, H)
            else:
                c = max(state[0] + instance.setup(k, prev, j), int(r[j])) + int(p[j, k])
                nxt = (c, state[1] + _job_cost(instance, j, c))
            seq.append(j)
            visit(mask | bit, seq, nxt, j)
            seq.pop()

    visit(0, [0], np.zeros(H + 1) if idle else (0, 0), 0)
    return best, arg


def exact_optimum(instance: Instance, limits: OracleLimits = OracleLimits()):
    """Exhaustive optimum over all assignments and orders: ``(cost, schedule)``."""
    n, m = instance.n, instance.m
    if n > limits.max_jobs:
        raise OracleSizeError(f"{n} jobs exceed the oracle limit of {limits.max_jobs}")
    full = (1 << n) - 1
    tables = [_machine_tables(instance, k) for k in range(m)]
    # opt[S] over machines 0..k, with the chosen subset of machine k kept for recovery
    opt = tables[0][0].copy()
    choice = [np.arange(full + 1)]
    for k in range(1, m):
        cur, sel = tables[k][0], np.zeros(full + 1, dtype=np.int64)
        new = np.full(full + 1, np.iinfo(np.int64).max, dtype=np.int64)
        for S in range(full + 1):
            sub = S
            while True:
                v = cur[sub] + opt[S ^ sub]
                if v < new[S]:
                    new[S], sel[S] = v, sub
                if sub == 0:
                    break
                sub = (sub - 1) & S
        opt = new
        choice.append(sel)
    seqs = [None] * m
    S = full
    for k in range(m - 1, -1, -1):
        sub = int(choice[k][S]) if k else S
        seqs[k] = tables[k][1][sub]
        S ^= sub
    sched = Schedule(seqs)
    if instance.idle_allowed:
        sched.starts = [_dense_starts(seq, k, instance) for k, seq in enumerate(seqs)]
    sched.cost = int(opt[full])
    return int(opt[full]), sched


def _dense_starts(seq, k, instance):
    """Start times realising the dense timing optimum (latest-first recovery)."""
    H = safe_horizon(instance)
    tab = _cost_table(instance, H)
    Fs = [np.zeros(H + 1)]
    raws = []
    prev = 0
    for j in seq[1:]:
        gap = int(instance.p[j, k]) + instance.setup(k, prev, j)
        lo = int(instance.r[j]) + int(instance.p[j, k])
        G = np.full(H + 1, np.inf)
        G[gap:] = Fs[-1][:H + 1 - gap]
        G[:lo] = np.inf
        G += tab[j]
        raws.append(G)
        Fs.append(np.minimum.accumulate(G))
        prev = j
    starts = [0] * len(seq)
    bound = H
    for pos in range(len(seq) - 1, 0, -1):
        j = seq[pos]
        c = int(np.argmin(raws[pos - 1][:bound + 1]))
        starts[pos] = c - int(instance.p[j, k])
        bound = starts[pos] - instance.setup(k, seq[pos - 1], j)
    return starts


def schedule_cost(seqs, instance: Instance) -> int:
    """Objective of sequences under the instance's idle policy."""
    if instance.idle_allowed:
        return sum(dense_timing_cost(s, k, instance) for k, s in enumerate(seqs))
    return solution_cost(Schedule([list(s) for s in seqs]), instance)


def enumerate_neighbors(schedule: Schedule, nbh, instance: Instance) -> list:
    """Every move of ``nbh`` with the objective of the resulting schedule."""
    out = []
    for kind, k, k2, i, j, l, l2 in legal_moves(schedule.seqs, nbh):
        mv = Move(0, kind, k, k2, i, j, l, l2)
        new = apply_to_sequences(schedule.seqs, mv)
        out.append(Move(schedule_cost(new, instance), kind, k, k2, i, j, l, l2))
    return out


__all__ = [
    "OracleLimits", "OracleSizeError", "dense_timing_cost", "enumerate_neighbors",
    "exact_optimum", "grid_timing", "safe_horizon", "schedule_cost",
]
