"""Multi-start iterated local search driver."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import Instance, Schedule
from .moves import NeighborhoodConfig
from .search import TimeUp, make_evaluator, rvnd


@dataclass
class IlsParams:
    """Solver settings. ``iils=None`` means ``4n`` without idle time and ``n`` with it."""

    restarts: int = 10
    iils: Optional[int] = None
    time_limit: float = 600.0
    rcl_alpha: float = 0.15
    seed: int = 0
    evaluator: str = "auto"
    neighborhoods: Optional[NeighborhoodConfig] = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.iils is not None and self.iils < 1:
            raise ValueError("iils must be >= 1")
        if not 0.0 <= self.rcl_alpha <= 1.0:
            raise ValueError("rcl_alpha must lie in [0, 1]")

    def max_non_improving(self, instance: Instance) -> int:
        if self.iils is not None:
            return self.iils
        return max(1, instance.n if instance.idle_allowed else 4 * instance.n)


@dataclass
class RestartStats:
    cost: Optional[int]
    time_to_best_s: float
    iterations: int


@dataclass
class UilsResult:
    schedule: Schedule
    cost: int
    time_to_best_s: float
    time_total_s: float
    restarts_completed: int
    time_cap_hit: bool
    evaluator: str
    restarts: list = field(default_factory=list)


# --------------------------------------------------------------------------
# construction

def grasp_order(keys, rng, alpha: float) -> list:
    """Greedy randomized order: repeatedly pick uniformly among the
    ``ceil(alpha * remaining)`` smallest keys (ties by job index)."""
    remaining = sorted(range(1, len(keys)), key=lambda j: (keys[j], j))
    order = []
    while remaining:
        size = max(1, math.ceil(alpha * len(remaining)))
        order.append(remaining.pop(int(rng.integers(min(size, len(remaining))))))
    return order


def construct_initial(instance: Instance, rng, rcl_alpha: float = 0.15) -> Schedule:
    n, m = instance.n, instance.m
    if m > 1:
        perm = rng.permutation(np.arange(1, n + 1))
        where = rng.integers(m, size=n)
        seqs = [[0] for _ in range(m)]
        for j, k in zip(perm.tolist(), where.tolist()):
            seqs[k].append(j)
        return Schedule(seqs)
    if instance.flags.has_release_dates:
        return Schedule([[0] + grasp_order(instance.r.tolist(), rng, rcl_alpha)])
    if rng.random() < 0.5:
        return Schedule([[0] + rng.permutation(np.arange(1, n + 1)).tolist()])
    return Schedule([[0] + grasp_order(instance.d.tolist(), rng, rcl_alpha)])


# --------------------------------------------------------------------------
# perturbation

def _swap_blocks_intra(seq: list, rng) -> list:
    n = len(seq) - 1
    if n < 2:
        return list(seq)
    if n < 4:
        l = l2 = 1
    else:
        hi = max(2, n // 4)
        l = int(rng.integers(2, hi + 1))
        l2 = int(rng.integers(2, hi + 1))
    i = int(rng.integers(1, n - l - l2 + 2))
    j = int(rng.integers(i + l, n - l2 + 2))
    return seq[:i] + seq[j:j + l2] + seq[i + l:j] + seq[i:i + l] + seq[j + l2:]


def _exchange_blocks(seqs: list, rng, l: int, l2: int) -> list:
    """Move a block of ``l`` jobs from machine k to a random position of k'
    and a block of ``l2`` jobs from k' to a random position of k."""
    m = len(seqs)
    k, k2 = (int(x) for x in rng.choice(m, size=2, replace=False))
    a, b = list(seqs[k]), list(seqs[k2])
    la, lb = min(l, len(a) - 1), min(l2, len(b) - 1)
    blk_a, blk_b = [], []
    if la:
        i = int(rng.integers(1, len(a) - la + 1))
        blk_a, a = a[i:i + la], a[:i] + a[i + la:]
    if lb:
        j = int(rng.integers(1, len(b) - lb + 1))
        blk_b, b = b[j:j + lb], b[:j] + b[j + lb:]
    if blk_a:
        pos = int(rng.integers(1, len(b) + 1))
        b = b[:pos] + blk_a + b[pos:]
    if blk_b:
        pos = int(rng.integers(1, len(a) + 1))
        a = a[:pos] + blk_b + a[pos:]
    out = list(seqs)
    out[k], out[k2] = a, b
    return out


def perturb(schedule: Schedule, rng) -> Schedule:
    """Random kick: a block swap on one machine, or job exchanges between two."""
    seqs = [list(s) for s in schedule.seqs]
    if len(seqs) == 1:
        return Schedule([_swap_blocks_intra(seqs[0], rng)])
    if rng.random() < 0.5:
        for _ in range(int(rng.integers(1, 4))):
            seqs = _exchange_blocks(seqs, rng, 1, 1)
    else:
        seqs = _exchange_blocks(seqs, rng, int(rng.integers(1, 3)), int(rng.integers(2, 4)))
    return Schedule(seqs)


# --------------------------------------------------------------------------

def uils(instance: Instance, params: Optional[IlsParams] = None) -> UilsResult:
    """Run the multi-start ILS; returns the best schedule found.

    All randomness comes from one ``default_rng(params.seed)`` stream, drawn
    in program order: the construction of each restart, then the RVND
    neighborhood picks, then each perturbation and the RVND that follows it.
    """
    params = params or IlsParams()
    rng = np.random.default_rng(params.seed)
    ev = make_evaluator(instance, params.evaluator)
    config = params.neighborhoods or NeighborhoodConfig.for_machines(instance.m)
    max_fail = params.max_non_improving(instance)
    t0 = time.perf_counter()
    deadline = t0 + params.time_limit
    best: Optional[Schedule] = None
    best_t = 0.0
    restarts = []
    capped = False

    def consider(cost):
        nonlocal best, best_t
        if best is None or cost < best.cost:
            best = ev.schedule()
            best_t = time.perf_counter() - t0

    try:
        for _ in range(params.restarts):
            ev.load(construct_initial(instance, rng, params.rcl_alpha))
            stat = RestartStats(None, 0.0, 0)
            restarts.append(stat)
            rvnd(ev, rng, config, deadline)
            incumbent = ev.schedule()
            stat.cost, stat.time_to_best_s = incumbent.cost, time.perf_counter() - t0
            consider(incumbent.cost)
            fails = 0
            while fails < max_fail:
                stat.iterations += 1
                ev.load(perturb(incumbent, rng))
                rvnd(ev, rng, config, deadline)
                if ev.cost < incumbent.cost:
                    incumbent = ev.schedule()
                    stat.cost, stat.time_to_best_s = incumbent.cost, time.perf_counter() - t0
                    consider(incumbent.cost)
                    fails = 0
                else:
                    fails += 1
    except TimeUp:
        capped = True
        consider(ev.cost)
        last = restarts[-1] if restarts else None
        if last is not None and (last.cost is None or ev.cost < last.cost):
            last.cost, last.time_to_best_s = ev.cost, time.perf_counter() - t0
    completed = len(restarts) - (1 if capped else 0)
    return UilsResult(
        schedule=best,
        cost=best.cost,
        time_to_best_s=best_t,
        time_total_s=time.perf_counter() - t0,
        restarts_completed=completed,
        time_cap_hit=capped,
        evaluator=ev.name,
        restarts=restarts,
    )
