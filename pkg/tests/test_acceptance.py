"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""
import csv
import math
import os
import statistics
import time
from pathlib import Path

import numpy as np
import pytest

from uils import IlsParams, Schedule, solution_cost, uils
from uils.eval_piecewise import build_g_tables, penalty_fn
from uils.eval_timing import optimal_timing
from uils.generate import FAMILIES, family_instance, random_instance, random_schedule
from uils.ils import construct_initial
from uils.io import RunRecord, load_instance, read_bks
from uils.model import sequence_cost
from uils.moves import NeighborhoodConfig, apply_to_sequences
from uils.oracle import _dense_starts, enumerate_neighbors, exact_optimum, grid_timing, safe_horizon
from uils.piecewise import Segment
from uils.search import make_evaluator, rvnd

from conftest import example_instance

INF = math.inf


def test_worked_example_segments(verdict):
    inst = example_instance()
    expected = {
        "rho1": [Segment(0, 5, 10, -2), Segment(5, INF, 0, 4)],
        "rho2": [Segment(0, 5, 5, -1), Segment(5, INF, 0, 2)],
        "g2 shifted": [Segment(0, 2, 2, -1), Segment(2, INF, 0, 2)],
        "g1": [Segment(0, 2, 12, -3), Segment(2, 5, 6, 0), Segment(5, INF, 6, 6)],
    }
    build_g_tables([0, 1, 2], 0, inst)  # warm-up
    elapsed = INF
    for _ in range(5):
        t0 = time.perf_counter()
        rho1, rho2 = penalty_fn(inst, 1, 0), penalty_fn(inst, 2, 0)
        g = build_g_tables([0, 1, 2], 0, inst)
        elapsed = min(elapsed, time.perf_counter() - t0)
    got = {
        "rho1": rho1.segments,
        "rho2": rho2.segments,
        "g2 shifted": g[2].shifted(inst.p[1, 0]).restricted(0).segments,
        "g1": g[1].segments,
    }
    wrong = [k for k in expected if got[k] != expected[k]]
    ok = not wrong and elapsed < 1e-3
    verdict("1 worked-example segments", ok, f"mismatched={wrong or 'none'}, {elapsed * 1e3:.3f} ms")
    assert ok


def test_evaluator_equivalence(verdict):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    checked = 0
    per_combo = {}
    bad = []
    for case in range(200):
        setups, idle = case % 2 == 1, (case // 2) % 2 == 1
        n, m = int(rng.integers(5, 41)), int(rng.integers(1, 5))
        inst = random_instance(int(rng.integers(2**31)), n, m, setups=setups,
                               releases=setups and bool(rng.integers(2)), idle=idle)
        sched = random_schedule(int(rng.integers(2**31)), n, m)
        engines = ["timing"] if idle else (["direct"] if setups else ["piecewise", "direct"])
        nbhs = NeighborhoodConfig.for_machines(m).neighborhoods(m)
        # idle truth costs a dense DP per machine, so those instances scan one neighborhood
        chosen = [nbhs[i] for i in rng.permutation(len(nbhs))[:1 if idle else 3]]
        starts_cache = {}

        def starts(k, seq):
            key = (k, tuple(seq))
            if key not in starts_cache:
                starts_cache[key] = _dense_starts(seq, k, inst)
            return starts_cache[key]

        for engine in engines:
            ev = make_evaluator(inst, engine)
            ev.load(sched)
            moves = []
            for nbh in chosen:
                ev.scan(nbh, moves)
            for mv in moves:
                new = apply_to_sequences(sched.seqs, mv)
                st = [starts(k, s) for k, s in enumerate(new)] if idle else None
                truth = solution_cost(Schedule(new, st), inst)
                if truth != mv.cost:
                    bad.append((case, engine, mv, truth))
            checked += len(moves)
            key = f"{'setup' if setups else 'plain'}/{'idle' if idle else 'no-idle'}"
            per_combo[key] = per_combo.get(key, 0) + len(moves)
    elapsed = time.perf_counter() - t0
    ok = not bad and checked >= 10**5 and elapsed < 60
    verdict("2 evaluator equivalence", ok,
            f"{checked} moves ({per_combo}), {len(bad)} mismatches, {elapsed:.1f} s")
    assert ok, bad[:5]


def test_timing_dp_exact(verdict):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    done, bad = 0, []
    while done < 1000:
        n = int(rng.integers(1, 7))
        inst = random_instance(int(rng.integers(2**31)), n, int(rng.integers(1, 3)),
                               setups=bool(rng.integers(2)), releases=bool(rng.integers(2)),
                               idle=True, p_max=6, w_max=5, tf=float(rng.uniform(-0.3, 0.6)))
        horizon = safe_horizon(inst)
        if horizon > 60:
            continue
        k = int(rng.integers(inst.m))
        seq = [0] + (rng.permutation(n) + 1).tolist()
        starts, cost = optimal_timing(seq, k, inst)
        truth = grid_timing(seq, k, inst, horizon)
        if cost != truth or sequence_cost(seq, k, inst, starts) != cost:
            bad.append((seq, cost, truth))
        done += 1
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    verdict("3 timing DP exactness", ok, f"{done} sequences, {len(bad)} mismatches, {elapsed:.1f} s")
    assert ok, bad[:5]


def test_small_instances_solved_to_optimality(verdict):
    rng = np.random.default_rng(99)
    families = sorted(FAMILIES)
    t0 = time.perf_counter()
    hits, misses = 0, []
    for case in range(100):
        fam = families[case % len(families)]
        n, m = int(rng.integers(3, 8)), int(rng.integers(1, 4))
        inst = family_instance(int(rng.integers(2**31)), fam, n, m)
        opt, _ = exact_optimum(inst)
        best = None
        for seed in range(10):
            cost = uils(inst, IlsParams(seed=seed)).cost
            best = cost if best is None else min(best, cost)
            if best == opt:
                break  # the best over the seeds can no longer change
        if best == opt:
            hits += 1
        else:
            misses.append((case, fam, n, m, best, opt))
    elapsed = time.perf_counter() - t0
    ok = hits >= 95 and elapsed < 600
    verdict("4 oracle optimality", ok, f"{hits}/100 optimal, {elapsed:.1f} s")
    assert ok, misses


def test_local_optima_certified(verdict):
    rng = np.random.default_rng(5)
    families = sorted(FAMILIES)
    certified, failures = 0, []
    for case in range(100):
        n, m = int(rng.integers(2, 11)), int(rng.integers(1, 4))
        inst = family_instance(int(rng.integers(2**31)), families[case % len(families)], n, m)
        ev = make_evaluator(inst)
        ev.load(random_schedule(int(rng.integers(2**31)), n, m))
        cost = rvnd(ev, rng)
        sched = ev.schedule()
        assert solution_cost(sched, inst) == cost
        improving = [mv for nbh in NeighborhoodConfig.for_machines(m).neighborhoods(m)
                     for mv in enumerate_neighbors(sched, nbh, inst) if mv.cost < cost]
        if improving:
            failures.append((case, improving[0]))
        else:
            certified += 1
    ok = certified == 100
    verdict("5 local-optimum certification", ok, f"{certified}/100 certified")
    assert ok, failures[:3]


def _descent_time(inst, engine, seed):
    rng = np.random.default_rng(seed)
    start = construct_initial(inst, rng)
    t0 = time.perf_counter()
    ev = make_evaluator(inst, engine)
    ev.load(start)
    cost = rvnd(ev, rng)
    return time.perf_counter() - t0, cost


def test_piecewise_speedup(verdict):
    inst = random_instance(7, 200, 2, earliness=True, p_max=100, w_max=10, tf=0.6, rdd=0.4)
    small = random_instance(0, 20, 2)
    for engine in ("direct", "piecewise"):  # compile outside the timed runs
        _descent_time(small, engine, 0)
    direct, piecewise = [], []
    for rep in range(5):
        td, cd = _descent_time(inst, "direct", rep)
        tp, cp = _descent_time(inst, "piecewise", rep)
        assert cd == cp  # same trajectory, same local optimum
        direct.append(td)
        piecewise.append(tp)
    speedup = statistics.median(direct) / statistics.median(piecewise)
    ok = speedup >= 2.0
    verdict("6 piecewise speedup", ok,
            f"median direct {statistics.median(direct):.3f} s, piecewise "
            f"{statistics.median(piecewise):.3f} s, speedup {speedup:.2f}x")
    assert ok


def _record_without_times(inst, params):
    rec = RunRecord.from_result(inst, params, uils(inst, params)).to_dict()
    return {k: v for k, v in rec.items() if not k.endswith("_s")}


def test_determinism(verdict):
    rng = np.random.default_rng(11)
    families = sorted(FAMILIES)
    same = 0
    for case in range(20):
        inst = family_instance(int(rng.integers(2**31)), families[case % len(families)],
                               int(rng.integers(5, 16)), int(rng.integers(1, 4)))
        params = IlsParams(restarts=3, seed=int(rng.integers(1000)))
        same += _record_without_times(inst, params) == _record_without_times(inst, params)
    ok = same == 20
    verdict("7 determinism", ok, f"{same}/20 identical records")
    assert ok


ARCHIVE = os.environ.get("UILS_ARCHIVE")


@pytest.mark.skipif(not ARCHIVE, reason="set UILS_ARCHIVE to a directory with instances and optima.csv")
def test_archive_reproduction(verdict):
    root = Path(ARCHIVE)
    optima = read_bks(root / "optima.csv")
    files = [f for f in sorted(root.glob("*.txt")) if f.stem in optima]
    assert files, "no archive instance has a known optimum"
    matched, times = 0, []
    for f in files:
        inst = load_instance(f)
        hits = 0
        for seed in range(10):
            res = uils(inst, IlsParams(seed=seed))
            times.append(res.time_total_s)
            hits += res.cost == optima[f.stem]
        matched += hits >= 9
    ok = matched == len(files) and statistics.fmean(times) <= 5.0
    verdict("8 archive reproduction (optional)", ok,
            f"{matched}/{len(files)} instances matched in >= 9/10 seeds, "
            f"mean {statistics.fmean(times):.2f} s per run")
    assert ok
