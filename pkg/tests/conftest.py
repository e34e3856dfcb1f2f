import numpy as np
import pytest
from hypothesis import strategies as st

from uils import Instance
from uils.generate import random_instance, random_schedule


def example_instance(**kw) -> Instance:
    """Five jobs on one machine: p, d, w' and w below."""
    return Instance.build([3, 2, 1, 3, 1], [8, 7, 4, 3, 13],
                          w_early=[2, 1, 2, 1, 1], w_tardy=[4, 2, 4, 3, 1], **kw)


@pytest.fixture
def five_jobs():
    return example_instance()


@st.composite
def instances(draw, n_min=0, n_max=8, m_max=3, setups=None, releases=None, idle=None, earliness=None):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(n_min, n_max))
    m = draw(st.integers(1, m_max))
    flags = {}
    for name, fixed in (("setups", setups), ("releases", releases), ("idle", idle), ("earliness", earliness)):
        flags[name] = draw(st.booleans()) if fixed is None else fixed
    return random_instance(seed, n, m, **flags)


@st.composite
def instance_and_schedule(draw, **kw):
    inst = draw(instances(**kw))
    sched = random_schedule(draw(st.integers(0, 2**32 - 1)), inst.n, inst.m)
    return inst, sched


def rng(seed=0):
    return np.random.default_rng(seed)


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def verdict(pytestconfig):
    """Record one PASS/FAIL line; the lines are repeated in the terminal summary."""
    lines = pytestconfig.stash.setdefault(ACCEPTANCE, [])

    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
