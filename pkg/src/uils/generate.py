"""Random instances for tests, benchmarks and the oracle harness."""
from __future__ import annotations

import numpy as np

from .model import Instance

FAMILIES = {
    # name: (setups, releases, earliness, idle)
    "wt": (False, False, False, False),
    "wet": (False, False, True, False),
    "wet-idle": (False, False, True, True),
    "setup-wt": (True, False, False, False),
    "setup-wet-idle": (True, False, True, True),
    "release-wt": (False, True, False, False),
    "release-wet-idle": (False, True, True, True),
    "full": (True, True, True, True),
}


def random_instance(rng, n: int, m: int = 1, setups=False, releases=False, earliness=True,
                    idle=False, p_max=10, w_max=5, tf=0.4, rdd=0.8, name="") -> Instance:
    """Integer data; due dates are uniform on
    ``[load * (1 - tf - rdd/2), load * (1 - tf + rdd/2)]`` (clipped at 0),
    ``load`` being the mean machine load."""
    rng = np.random.default_rng(rng)
    p = rng.integers(1, p_max + 1, size=(n, m))
    load = max(1, int(p.mean(axis=1).sum() / m))
    lo = max(0, int(load * (1 - tf - rdd / 2)))
    hi = max(lo, int(load * (1 - tf + rdd / 2)))
    d = rng.integers(lo, hi + 1, size=n)
    r = rng.integers(0, max(1, load // 2) + 1, size=n) if releases else None
    w_tardy = rng.integers(1, w_max + 1, size=n)
    w_early = rng.integers(0, w_max + 1, size=n) if earliness else None
    s = None
    if setups:
        s = rng.integers(0, max(2, p_max // 2) + 1, size=(m, n + 1, n + 1))
        for k in range(m):
            np.fill_diagonal(s[k], 0)
    return Instance.build(p, d, r=r, w_early=w_early, w_tardy=w_tardy, setups=s,
                          idle_allowed=idle, name=name)


def family_instance(rng, family: str, n: int, m: int = 1, **kw) -> Instance:
    setups, releases, earliness, idle = FAMILIES[family]
    return random_instance(rng, n, m, setups=setups, releases=releases, earliness=earliness,
                           idle=idle, name=kw.pop("name", family), **kw)


def random_schedule(rng, n: int, m: int):
    """Uniformly random assignment and order of jobs ``1..n``."""
    from .model import Schedule
    rng = np.random.default_rng(rng)
    seqs = [[0] for _ in range(m)]
    for j in rng.permutation(np.arange(1, n + 1)):
        seqs[int(rng.integers(m))].append(int(j))
    return Schedule(seqs)
