import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uils import Schedule, solution_cost
from uils.eval_direct import DirectEvaluator, comp_cost_block, prefix_costs
from uils.eval_piecewise import (PiecewiseEvaluator, block_cost_between, build_g_arrays, build_g_tables,
                                 create_processing_list, eval_fn_at, gval, penalty_fn, processing_list)
from uils.generate import random_instance, random_schedule
from uils.moves import Neighborhood, NeighborhoodConfig, NeighborhoodType
from uils.piecewise import PiecewiseFn, Segment

from conftest import example_instance, instance_and_schedule

INF = math.inf


def test_penalty_functions():
    inst = example_instance()
    assert penalty_fn(inst, 1, 0).segments == [Segment(0, 5, 10, -2), Segment(5, INF, 0, 4)]
    assert penalty_fn(inst, 2, 0).segments == [Segment(0, 5, 5, -1), Segment(5, INF, 0, 2)]
    assert eval_fn_at(penalty_fn(inst, 1, 0), 5) == 0
    from uils import Instance
    late = Instance.build([2], [0], w_tardy=[3])
    assert penalty_fn(late, 1, 0).segments == [Segment(0, INF, 6, 3)]


def test_g_tables_example():
    inst = example_instance()
    g = build_g_tables([0, 1, 2], 0, inst)
    assert g[1].segments == [Segment(0, 2, 12, -3), Segment(2, 5, 6, 0), Segment(5, INF, 6, 6)]
    assert g[2] == penalty_fn(inst, 2, 0)
    assert g[2].shifted(3).restricted(0).segments == [Segment(0, 2, 2, -1), Segment(2, INF, 0, 2)]
    assert eval_fn_at(g[1], 3) == 6 and eval_fn_at(g[1], 0) == 12
    assert block_cost_between(g, [0, 1, 2], 0, 1, 3, 0, inst) == 12
    assert block_cost_between(g, [0, 1, 2], 0, 2, 2, 7, inst) == 0


def test_g_tables_pointwise_against_blocks():
    inst = example_instance()
    seq = [0, 2, 1]
    g = build_g_tables(seq, 0, inst)
    for t in range(16):
        assert g[1](t) == comp_cost_block(0, 1, 2, seq, 0, t, inst)
        assert g[1](t) == penalty_fn(inst, 2, 0)(t) + g[2](t + 2)
        assert g[1].is_continuous()


def test_processing_list():
    inst = example_instance()
    assert create_processing_list([0, 1, 2, 3], 0, 2, inst) == [(1, 5), (2, 3)]
    assert create_processing_list([0, 1, 2], 0, 2, inst) == [(1, 5)]
    flat = random_instance(0, 5, 1, p_max=1)
    assert [e[0] for e in create_processing_list([0, 1, 2, 3, 4, 5], 0, 1, flat)] == [1, 2, 3, 4, 5]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 12), st.integers(1, 3))
def test_flat_g_arrays_match_reference(seed, n, m):
    inst = random_instance(seed, n, m, earliness=True)
    sched = random_schedule(seed, n, m)
    for k, seq in enumerate(sched.seqs):
        ref = build_g_tables(seq, k, inst)
        nk = len(seq) - 1
        gx, gc, ga, gs, ge = build_g_arrays(np.array(seq), nk, k, inst.p, inst.d, inst.w_early, inst.w_tardy)
        cur = gs.copy()
        for j in range(1, nk + 1):
            assert list(gx[gs[j]:ge[j]]) == ref[j].xs
            assert list(gc[gs[j]:ge[j]]) == ref[j].cs
            assert list(ga[gs[j]:ge[j]]) == ref[j].slopes
            assert ge[j] - gs[j] <= nk - j + 2
            for t in (0, 3, 17, 40, 9):
                assert gval(gx, gc, ga, gs, ge, cur, j, t) == ref[j](t)
        assert gval(gx, gc, ga, gs, ge, cur, nk + 1, 5) == 0
        for l in (1, 2, 3):
            pos, tot = processing_list(np.array(seq), nk, k, l, inst.p)
            assert list(zip(pos.tolist(), tot.tolist())) == create_processing_list(seq, k, l, inst)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_block_cost_between_random(seed):
    rs = np.random.default_rng(seed)
    n = int(rs.integers(1, 12))
    inst = random_instance(seed, n, 1)
    seq = [0] + rs.permutation(np.arange(1, n + 1)).tolist()
    g = build_g_tables(seq, 0, inst)
    i = int(rs.integers(1, n + 1))
    stop = int(rs.integers(i, n + 2))
    t = int(rs.integers(0, 60))
    expected = comp_cost_block(0, i, stop - 1, seq, 0, t, inst) if stop > i else 0
    assert block_cost_between(g, seq, 0, i, stop, t, inst) == expected


def test_rejects_unsupported_features():
    with pytest.raises(ValueError):
        PiecewiseEvaluator(random_instance(0, 4, 1, setups=True))
    with pytest.raises(ValueError):
        PiecewiseEvaluator(random_instance(0, 4, 1, releases=True))
    with pytest.raises(ValueError):
        PiecewiseEvaluator(random_instance(0, 4, 1, earliness=True, idle=True))


@settings(max_examples=80, deadline=None)
@given(instance_and_schedule(n_min=1, n_max=10, m_max=3, setups=False, releases=False, idle=False))
def test_scans_match_direct_engine_and_reference(case):
    inst, sched = case
    fast, slow = PiecewiseEvaluator(inst), DirectEvaluator(inst)
    fast.load(sched)
    slow.load(sched)
    nbhs = NeighborhoodConfig().neighborhoods(inst.m) + [Neighborhood(NeighborhoodType.INSERT_INTRA, 3)]
    for nbh in nbhs:
        rf, rs = [], []
        assert fast.scan(nbh, rf) == slow.scan(nbh, rs)
        assert sorted(rf) == sorted(rs)
        for mv in rf[:: max(1, len(rf) // 25)]:
            assert mv.cost == fast.move_cost(mv)


def test_optimal_schedule_has_no_improving_move():
    inst = example_instance().with_objective("wt")
    ev = PiecewiseEvaluator(inst)
    ev.load(Schedule([[0, 4, 3, 1, 2, 5]]))
    assert ev.cost == 4
    for nbh in NeighborhoodConfig.single_machine().neighborhoods(1):
        assert ev.scan(nbh) is None
