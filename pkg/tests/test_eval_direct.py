import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uils import Instance, Move, MoveKind, Schedule, solution_cost
from uils.eval_direct import DirectEvaluator, chain_cost, comp_cost_block, direct_move_cost, instance_arrays, prefix_costs
from uils.moves import NeighborhoodConfig, apply_to_sequences, legal_moves

from conftest import example_instance, instance_and_schedule


def test_prefix_costs_example():
    pc = prefix_costs([0, 1, 2], 0, example_instance())
    assert pc.C.tolist() == [0, 3, 5]
    assert pc.W.tolist() == [0, 10, 12]
    pc = prefix_costs([0], 0, example_instance())
    assert pc.C.tolist() == [0] and pc.W.tolist() == [0]


def test_prefix_costs_with_setup():
    s = np.zeros((1, 6, 6), dtype=int)
    s[0, 0, 1] = 2
    pc = prefix_costs([0, 1], 0, example_instance(setups=s))
    assert pc.C[1] == 5 and pc.W[1] == 6


def test_comp_cost_block():
    inst = example_instance()
    assert comp_cost_block(0, 1, 2, [0, 1, 2], 0, 0, inst) == 12
    assert comp_cost_block(1, 2, 2, [0, 1, 2], 0, 3, inst) == 2
    assert comp_cost_block(0, 2, 1, [0, 1, 2], 0, 0, inst) == 0
    with pytest.raises(IndexError):
        comp_cost_block(0, 1, 3, [0, 1, 2], 0, 0, inst)


def test_move_before_first_job():
    inst = example_instance()
    seqs = [[0, 1, 2, 3, 4, 5]]
    pcs = [prefix_costs(seqs[0], 0, inst)]
    mv = Move(0, MoveKind.INSERT_BWD, 0, 0, 4, 0, 1)
    assert direct_move_cost(mv, seqs, pcs, inst) == solution_cost(Schedule([[0, 4, 1, 2, 3, 5]]), inst) == 29


def test_illegal_moves_rejected():
    inst = example_instance()
    seqs = [[0, 1, 2, 3, 4, 5]]
    pcs = [prefix_costs(seqs[0], 0, inst)]
    for mv in (Move(0, MoveKind.INSERT_FWD, 0, 0, 2, 2, 1),      # target inside the block
               Move(0, MoveKind.INSERT_FWD, 0, 0, 0, 3, 1),      # dummy moved
               Move(0, MoveKind.SWAP_INTRA, 0, 0, 1, 2, 2, 1),   # overlapping blocks
               Move(0, MoveKind.INSERT_BWD, 0, 0, 5, 1, 2)):     # past the end
        with pytest.raises(ValueError):
            direct_move_cost(mv, seqs, pcs, inst)


def test_suffix_recomputation_is_consistent():
    inst = Instance.build([3, 2, 4, 1], [2, 9, 4, 6], r=[0, 8, 0, 3], w_early=[1, 0, 2, 1])
    seq = np.array([0, 1, 2, 3, 4])
    pc = prefix_costs(seq, 0, inst)
    for j in range(1, 5):
        cost, end = chain_cost(seq, j, 4, 0, seq[j - 1], pc.C[j - 1], *instance_arrays(inst))
        assert pc.W[j - 1] + cost == pc.W[4] and end == pc.C[4]


@settings(max_examples=80, deadline=None)
@given(instance_and_schedule(n_min=1, n_max=8, m_max=3, idle=False))
def test_every_move_matches_reference(case):
    inst, sched = case
    ev = DirectEvaluator(inst)
    ev.load(sched)
    for nbh in NeighborhoodConfig().neighborhoods(inst.m):
        record = []
        best = ev.scan(nbh, record)
        assert sorted(m.key() for m in record) == sorted(legal_moves(sched.seqs, nbh))
        for mv in record:
            truth = solution_cost(Schedule(apply_to_sequences(sched.seqs, mv)), inst)
            assert mv.cost == truth == ev.move_cost(mv)
        if record and min(record).cost < ev.cost:
            assert best == min(record)
        else:
            assert best is None


def test_apply_refreshes_only_state_it_needs():
    inst = example_instance(r=[0, 0, 4, 0, 0])
    ev = DirectEvaluator(inst)
    ev.load(Schedule([[0, 1, 2, 3, 4, 5]]))
    mv = ev.scan(NeighborhoodConfig.single_machine().neighborhoods(1)[0])
    assert mv is not None
    ev.apply(mv)
    assert ev.cost == mv.cost == solution_cost(ev.schedule(), inst)
