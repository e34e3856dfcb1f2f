import pytest
from hypothesis import given, settings, strategies as st
from itertools import permutations

from uils import Instance, Schedule, solution_cost
from uils.generate import random_instance, random_schedule
from uils.moves import Neighborhood, NeighborhoodType as T
from uils.oracle import (OracleLimits, OracleSizeError, dense_timing_cost, enumerate_neighbors, exact_optimum,
                         grid_timing)

from conftest import example_instance


def test_single_job():
    inst = Instance.build([4], [2], w_tardy=[3])
    cost, sched = exact_optimum(inst)
    assert cost == 6 and sched.seqs == [[0, 1]]


def test_example_weighted_tardiness_optimum():
    # frozen from exact_optimum; agrees with a plain permutation sweep below
    inst = example_instance().with_objective("wt")
    cost, sched = exact_optimum(inst)
    assert cost == 4
    assert sched.seqs == [[0, 4, 3, 1, 2, 5]]
    assert min(solution_cost(Schedule([[0, *p]]), inst) for p in permutations(range(1, 6))) == 4


def test_example_earliness_tardiness_optima():
    assert exact_optimum(example_instance())[0] == 8
    cost, sched = exact_optimum(example_instance(idle_allowed=True))
    assert cost == 5 and solution_cost(sched, example_instance(idle_allowed=True)) == 5


def test_two_machines_with_idle_match_grid():
    inst = random_instance(21, 4, 2, idle=True, p_max=5)
    cost, sched = exact_optimum(inst)
    assert solution_cost(sched, inst) == cost
    assert cost == sum(grid_timing(s, k, inst, 60) for k, s in enumerate(sched.seqs))


def test_size_guards():
    with pytest.raises(OracleSizeError):
        exact_optimum(random_instance(0, 9, 1))
    exact_optimum(random_instance(0, 3, 1), OracleLimits(max_jobs=3))
    inst = example_instance(idle_allowed=True)
    with pytest.raises(OracleSizeError):
        grid_timing([0, 1, 2, 3, 4, 5, 1, 2], 0, inst, 60)
    with pytest.raises(ValueError, match="horizon"):
        grid_timing([0, 1, 2, 3], 0, inst, 4)


def test_grid_single_job():
    inst = Instance.build([3], [2], w_early=[1], w_tardy=[2], r=[4], idle_allowed=True)
    assert grid_timing([0, 1], 0, inst, 20) == min(2 * (s + 3 - 2) for s in range(4, 21))


def test_empty_neighborhood():
    assert enumerate_neighbors(Schedule([[0, 1]]), Neighborhood(T.INSERT_INTRA, 1), Instance.build([1], [1])) == []


@pytest.mark.parametrize("n,l", [(1, 1), (5, 1), (6, 2), (8, 3)])
def test_move_counts(n, l):
    inst = random_instance(0, n, 2)
    sched = Schedule([[0, *range(1, n + 1)], [0]])
    fwd = [m for m in enumerate_neighbors(sched, Neighborhood(T.INSERT_INTRA, l), inst) if m.kind == 0]
    assert len(fwd) == sum(n - i - l + 1 for i in range(1, n - l + 1))
    inter = enumerate_neighbors(sched, Neighborhood(T.INSERT_INTER, l), inst)
    # every block can only go to the single slot of the empty machine
    assert len(inter) == n - l + 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 3), st.booleans(), st.booleans())
def test_optimum_bounds_random_schedules(seed, n, m, idle, setups):
    inst = random_instance(seed, n, m, idle=idle, setups=setups)
    cost, sched = exact_optimum(inst)
    assert solution_cost(sched, inst) == cost
    other = random_schedule(seed, n, m)
    if idle:
        assert cost <= sum(dense_timing_cost(s, k, inst) for k, s in enumerate(other.seqs))
    else:
        assert cost <= solution_cost(other, inst)
