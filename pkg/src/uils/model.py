"""Problem instances, schedules and the reference objective.

Jobs are numbered ``1..n``; index ``0`` is the dummy job that heads every
machine sequence. All times and costs are exact Python/NumPy integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np


class InstanceError(ValueError):
    """Raised for malformed instance data."""


class ScheduleError(ValueError):
    """Raised for structurally invalid schedules."""


@dataclass(frozen=True)
class FeatureFlags:
    has_setups: bool
    has_release_dates: bool
    has_earliness: bool
    idle_allowed: bool

    @property
    def evaluator(self) -> str:
        """Name of the move evaluation engine suited to these features."""
        if self.idle_allowed and self.has_earliness:
            return "timing"
        if self.has_setups or self.has_release_dates:
            return "direct"
        return "piecewise"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Instance:
    """An E-T scheduling instance on ``m`` unrelated machines.

    Arrays are indexed by job with row 0 reserved for the dummy job:
    ``p[j, k]``, ``d[j]``, ``r[j]``, ``w_early[j]``, ``w_tardy[j]``.
    Setups are stored machine-major, ``s[k, i, j]`` being the setup before
    ``j`` when it follows ``i`` on machine ``k``; ``s`` is ``None`` when the
    instance has no setups.
    """

    p: np.ndarray
    d: np.ndarray
    r: np.ndarray
    w_early: np.ndarray
    w_tardy: np.ndarray
    s: Optional[np.ndarray] = None
    idle_allowed: bool = False
    name: str = ""
    flags: FeatureFlags = field(init=False)

    def __post_init__(self):
        for attr in ("p", "d", "r", "w_early", "w_tardy"):
            object.__setattr__(self, attr, _frozen(getattr(self, attr)))
        if self.s is not None:
            s = _frozen(self.s)
            object.__setattr__(self, "s", s if s.any() else None)
        self._validate()
        object.__setattr__(self, "flags", classify(self))

    @classmethod
    def build(cls, p, d, r=None, w_early=None, w_tardy=None, setups=None,
              idle_allowed=False, name=""):
        """Build from per-real-job data (length ``n`` sequences).

        ``p`` is ``n x m`` (or length ``n`` for a single machine). ``setups``,
        when given, is ``m x (n+1) x (n+1)`` with row 0 holding the initial
        setups from the dummy job.
        """
        p = np.asarray(p, dtype=np.int64)
        if p.ndim == 1:
            p = p[:, None]
        n, m = p.shape
        zeros = np.zeros(n, dtype=np.int64)

        def pad(v, default):
            v = default if v is None else np.asarray(v, dtype=np.int64)
            if v.shape != (n,):
                raise InstanceError(f"expected {n} job values, got shape {v.shape}")
            return np.concatenate([[0], v])

        p_full = np.vstack([np.zeros((1, m), dtype=np.int64), p])
        return cls(
            p=p_full,
            d=pad(d, None),
            r=pad(r, zeros),
            w_early=pad(w_early, zeros),
            w_tardy=pad(w_tardy, np.ones(n, dtype=np.int64)),
            s=None if setups is None else np.asarray(setups, dtype=np.int64),
            idle_allowed=idle_allowed,
            name=name,
        )

    @classmethod
    def from_uniform(cls, p, speeds, d, **kw):
        """Uniform machines: ``p[j, k] = ceil(p_j / speed_k)``."""
        p = [[math.ceil(pj / sk) for sk in speeds] for pj in p]
        return cls.build(p, d, **kw)

    @property
    def n(self) -> int:
        return self.p.shape[0] - 1

    @property
    def m(self) -> int:
        return self.p.shape[1]

    def setup(self, k: int, i: int, j: int) -> int:
        return 0 if self.s is None else int(self.s[k, i, j])

    def _validate(self):
        p = self.p
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise InstanceError("processing times must be an (n+1) x m array")
        n1, m = p.shape
        for name in ("d", "r", "w_early", "w_tardy"):
            if getattr(self, name).shape != (n1,):
                raise InstanceError(f"{name} must have length n+1 = {n1}")
        if n1 > 1 and p[1:].min() < 1:
            raise InstanceError("processing times of real jobs must be >= 1")
        if p[0].any() or self.d[0] or self.r[0] or self.w_early[0] or self.w_tardy[0]:
            raise InstanceError("dummy job 0 must have zero data")
        for name in ("d", "r", "w_early", "w_tardy"):
            if getattr(self, name).min() < 0:
                raise InstanceError(f"{name} must be non-negative")
        if self.s is not None:
            if self.s.shape != (m, n1, n1):
                raise InstanceError(f"setups must have shape {(m, n1, n1)}, got {self.s.shape}")
            if self.s.min() < 0:
                raise InstanceError("setup times must be non-negative")

    def with_objective(self, preset: str) -> "Instance":
        """Derive a special-case objective.

        ``wet`` keeps the data, ``wt`` drops earliness, ``wc`` sets every due
        date to zero (weighted completion time) and ``wf`` sets due dates to
        release dates (weighted flow time).
        """
        if preset == "wet":
            return self
        zero = np.zeros_like(self.w_early)
        if preset == "wt":
            return replace(self, w_early=zero)
        if preset == "wc":
            return replace(self, w_early=zero, d=np.zeros_like(self.d))
        if preset == "wf":
            return replace(self, w_early=zero, d=self.r.copy())
        raise InstanceError(f"unknown objective preset {preset!r}")

    def with_idle(self, idle_allowed: bool) -> "Instance":
        return replace(self, idle_allowed=idle_allowed)


def classify(instance: Instance) -> FeatureFlags:
    """Feature flags from the instance data plus its declared idle policy."""
    return FeatureFlags(
        has_setups=instance.s is not None and bool(instance.s.any()),
        has_release_dates=bool(instance.r.any()),
        has_earliness=bool(instance.w_early.any()),
        idle_allowed=bool(instance.idle_allowed),
    )


def job_cost(instance: Instance, j: int, completion: int) -> int:
    d = int(instance.d[j])
    if completion > d:
        return int(instance.w_tardy[j]) * (completion - d)
    return int(instance.w_early[j]) * (d - completion)


@dataclass
class Schedule:
    """Per-machine job sequences, each headed by the dummy job 0.

    ``starts`` mirrors ``seqs`` position by position (the dummy starts at 0)
    and is only filled for variants that may insert idle time.
    """

    seqs: list
    starts: Optional[list] = None
    cost: Optional[int] = None

    def copy(self) -> "Schedule":
        return Schedule(
            [list(s) for s in self.seqs],
            None if self.starts is None else [list(s) for s in self.starts],
            self.cost,
        )

    @property
    def m(self) -> int:
        return len(self.seqs)

    def assignment(self, n: int) -> np.ndarray:
        """Machine index of every job (index 0 unused, set to -1)."""
        out = np.full(n + 1, -1, dtype=np.int64)
        for k, seq in enumerate(self.seqs):
            for j in seq[1:]:
                out[j] = k
        return out

    @classmethod
    def from_sequences(cls, sequences: Sequence[Sequence[int]]) -> "Schedule":
        """Build from sequences of real jobs (the dummy is prepended)."""
        return cls([[0, *map(int, s)] for s in sequences])


def check_structure(schedule: Schedule, instance: Instance) -> None:
    if len(schedule.seqs) != instance.m:
        raise ScheduleError(f"expected {instance.m} machine sequences, got {len(schedule.seqs)}")
    seen = np.zeros(instance.n + 1, dtype=bool)
    for k, seq in enumerate(schedule.seqs):
        if not seq or seq[0] != 0:
            raise ScheduleError(f"machine {k} sequence must start with the dummy job 0")
        for j in seq[1:]:
            if not 1 <= j <= instance.n:
                raise ScheduleError(f"machine {k}: unknown job {j}")
            if seen[j]:
                raise ScheduleError(f"job {j} scheduled more than once")
            seen[j] = True
    missing = np.flatnonzero(~seen[1:]) + 1
    if missing.size:
        raise ScheduleError(f"jobs missing from schedule: {missing.tolist()}")


def completion_times(seq: Sequence[int], k: int, instance: Instance) -> list:
    """Semi-active completion times: ``C = max(C_prev + setup, r) + p``."""
    out = [0]
    c = 0
    prev = 0
    for j in seq[1:]:
        start = max(c + instance.setup(k, prev, j), int(instance.r[j]))
        c = start + int(instance.p[j, k])
        out.append(c)
        prev = j
    return out


def sequence_cost(seq: Sequence[int], k: int, instance: Instance, starts=None) -> int:
    """Cost of one machine sequence, from explicit starts or semi-active timing."""
    if starts is None:
        comps = completion_times(seq, k, instance)
    else:
        if len(starts) != len(seq):
            raise ScheduleError(f"machine {k}: {len(seq)} jobs but {len(starts)} start times")
        comps = [0]
        prev = 0
        for pos in range(1, len(seq)):
            j = seq[pos]
            st = starts[pos]
            earliest = comps[-1] + instance.setup(k, prev, j)
            if st < instance.r[j]:
                raise ScheduleError(f"job {j} starts at {st} before its release date {instance.r[j]}")
            if st < earliest:
                raise ScheduleError(f"job {j} starts at {st} before machine {k} is ready at {earliest}")
            comps.append(int(st) + int(instance.p[j, k]))
            prev = j
    return sum(job_cost(instance, j, c) for j, c in zip(seq[1:], comps[1:]))


def solution_cost(schedule: Schedule, instance: Instance) -> int:
    """Reference objective, recomputed from scratch.

    Uses ``schedule.starts`` when present, otherwise semi-active timing.
    Every incremental evaluator is tested against this function.
    """
    check_structure(schedule, instance)
    total = 0
    for k, seq in enumerate(schedule.seqs):
        starts = None if schedule.starts is None else schedule.starts[k]
        total += sequence_cost(seq, k, instance, starts)
    return total
