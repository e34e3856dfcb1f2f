"""Neighborhood scans and randomized variable neighborhood descent."""
from __future__ import annotations

import time
from typing import Optional

from .eval_direct import DirectEvaluator
from .eval_piecewise import PiecewiseEvaluator
from .eval_timing import TimingEvaluator
from .model import Instance, Schedule
from .moves import Move, Neighborhood, NeighborhoodConfig, NeighborhoodType

ENGINES = {
    "direct": DirectEvaluator,
    "piecewise": PiecewiseEvaluator,
    "timing": TimingEvaluator,
}


def make_evaluator(instance: Instance, kind: str = "auto"):
    """Engine chosen from the feature flags, or forced by name.

    The direct engine can stand in for the piecewise one; neither handles
    idle time with earliness.
    """
    if kind == "auto":
        kind = instance.flags.evaluator
    if kind not in ENGINES:
        raise ValueError(f"unknown evaluator {kind!r}")
    f = instance.flags
    if kind != "timing" and f.idle_allowed and f.has_earliness:
        raise ValueError(f"{kind} evaluation cannot insert idle time")
    return ENGINES[kind](instance)


def _scan(evaluator, schedule: Optional[Schedule], nbh: Neighborhood) -> Optional[Move]:
    if schedule is not None:
        evaluator.load(schedule)
    return evaluator.scan(nbh)


def scan_insertion_intra(evaluator, l: int, schedule: Optional[Schedule] = None) -> Optional[Move]:
    """Best improving forward or backward block insertion within a machine."""
    return _scan(evaluator, schedule, Neighborhood(NeighborhoodType.INSERT_INTRA, l))


def scan_swap_intra(evaluator, l: int, l2: int, schedule: Optional[Schedule] = None) -> Optional[Move]:
    return _scan(evaluator, schedule, Neighborhood(NeighborhoodType.SWAP_INTRA, l, l2))


def scan_insertion_inter(evaluator, l: int, schedule: Optional[Schedule] = None) -> Optional[Move]:
    return _scan(evaluator, schedule, Neighborhood(NeighborhoodType.INSERT_INTER, l))


def scan_swap_inter(evaluator, l: int, l2: int, schedule: Optional[Schedule] = None) -> Optional[Move]:
    return _scan(evaluator, schedule, Neighborhood(NeighborhoodType.SWAP_INTER, l, l2))


class TimeUp(Exception):
    pass


def rvnd(evaluator, rng, config: Optional[NeighborhoodConfig] = None, deadline: Optional[float] = None,
         stats: Optional[dict] = None) -> int:
    """Descend from the evaluator's loaded schedule to a local optimum.

    Neighborhoods are drawn uniformly from a pool; a failed neighborhood
    leaves the pool, an improvement refills it. Returns the final cost.
    Raises ``TimeUp`` (with the evaluator at an improved state) when
    ``deadline`` (a ``time.perf_counter`` value) passes between scans.
    """
    m = len(evaluator.seqs)
    config = config or NeighborhoodConfig.for_machines(m)
    full = config.neighborhoods(m)
    pool = list(full)
    while pool:
        if deadline is not None and time.perf_counter() > deadline:
            raise TimeUp
        nbh = pool[int(rng.integers(len(pool)))]
        move = evaluator.scan(nbh)
        if stats is not None:
            stats["scans"] = stats.get("scans", 0) + 1
        if move is None:
            pool.remove(nbh)
        else:
            evaluator.apply(move)
            if stats is not None:
                stats["moves"] = stats.get("moves", 0) + 1
            pool = list(full)
    return evaluator.cost
