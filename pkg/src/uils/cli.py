"""Command-line interface: ``uils solve|bench|verify|timing``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .eval_timing import optimal_timing
from .ils import IlsParams, uils
from .io import ParseError, RunRecord, load_instance, read_bks, report
from .model import Schedule, ScheduleError, completion_times, sequence_cost, solution_cost
from .oracle import OracleLimits, OracleSizeError, enumerate_neighbors, exact_optimum

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SIZE, EXIT_TIMECAP = 0, 1, 2, 3, 4


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=10, help="multi-start iterations (default: 10)")
    p.add_argument("--iils", type=int, default=None,
                   help="non-improving perturbations before a restart (default: 4n, or n with idle)")
    p.add_argument("--time-limit", type=float, default=600.0, help="wall-clock cap in seconds (default: 600)")
    p.add_argument("--rcl-alpha", type=float, default=0.15, help="GRASP candidate fraction (default: 0.15)")
    p.add_argument("--idle", choices=("on", "off"), default=None, help="override the file's idle policy")
    p.add_argument("--objective", choices=("wet", "wt", "wc", "wf"), default="wet",
                   help="wet: file data, wt: drop earliness, wc: d=0, wf: d=r")
    p.add_argument("--evaluator", choices=("auto", "direct", "piecewise", "timing"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uils", description="Earliness-tardiness scheduling by iterated local search")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance and print its run record")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write record and schedule as JSON here")
    _solver_args(p)

    p = sub.add_parser("bench", help="run every instance of a directory for several seeds")
    p.add_argument("directory")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--seeds", type=int, default=10, help="number of consecutive seeds (default: 10)")
    p.add_argument("--bks", help="CSV of instance,best-known cost for gap columns")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--pattern", default="*.txt", help="instance file glob (default: *.txt)")
    p.add_argument("--out", help="report path (default: stdout)")
    _solver_args(p)

    p = sub.add_parser("verify", help="cross-check the solver and evaluators against exhaustive oracles")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--max-jobs", type=int, default=OracleLimits.max_jobs)
    p.add_argument("--out")
    _solver_args(p)

    p = sub.add_parser("timing", help="optimal start times for a fixed sequence")
    p.add_argument("instance")
    p.add_argument("--machine", type=int, default=1, help="machine number, 1-based (default: 1)")
    p.add_argument("--sequence", required=True, help="job numbers in processing order, e.g. '3 1 2'")
    p.add_argument("--idle", choices=("on", "off"), default="on")
    p.add_argument("--objective", choices=("wet", "wt", "wc", "wf"), default="wet")
    p.add_argument("--out")
    return parser


def _prepare(path, args):
    inst = load_instance(path)
    if args.idle is not None:
        inst = inst.with_idle(args.idle == "on")
    return inst.with_objective(args.objective)


def _params(args, seed) -> IlsParams:
    return IlsParams(restarts=args.restarts, iils=args.iils, time_limit=args.time_limit,
                     rcl_alpha=args.rcl_alpha, seed=seed, evaluator=args.evaluator)


def _run(inst, params: IlsParams, bks=None):
    res = uils(inst, params)
    return RunRecord.from_result(inst, params, res, bks), res


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _schedule_json(s: Schedule) -> dict:
    return {"sequences": [seq[1:] for seq in s.seqs],
            "starts": None if s.starts is None else [st[1:] for st in s.starts],
            "cost": s.cost}


def cmd_solve(args) -> int:
    inst = _prepare(args.instance, args)
    rec, res = _run(inst, _params(args, args.seed))
    print(json.dumps(rec.to_dict()))
    if args.out:
        Path(args.out).write_text(json.dumps({"record": rec.to_dict(), "schedule": _schedule_json(res.schedule)},
                                             indent=2) + "\n")
    return EXIT_TIMECAP if rec.time_cap_hit else EXIT_OK


def _bench_job(job):
    path, args, seed, bks = job
    inst = _prepare(path, args)
    return _run(inst, _params(args, seed), bks)[0]


def cmd_bench(args) -> int:
    files = sorted(Path(args.directory).glob(args.pattern))
    if not files:
        print(f"no instances matching {args.pattern} in {args.directory}", file=sys.stderr)
        return EXIT_FAIL
    for f in files:  # fail fast on bad files before spawning workers
        load_instance(f)
    bks = read_bks(args.bks) if args.bks else {}
    jobs = [(f, args, args.seed + s, bks.get(f.stem)) for f in files for s in range(args.seeds)]
    workers = max(1, min(int(os.environ.get("UILS_THREADS", os.cpu_count() or 1)), len(jobs)))
    if workers == 1:
        records = [_bench_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_bench_job, jobs))
    _emit(report(records, args.format), args.out)
    return EXIT_TIMECAP if any(r.time_cap_hit for r in records) else EXIT_OK


def cmd_verify(args) -> int:
    inst = _prepare(args.instance, args)
    opt, opt_sched = exact_optimum(inst, OracleLimits(max_jobs=args.max_jobs))
    lines = [f"exact optimum: {opt}"]
    ok = solution_cost(opt_sched, inst) == opt
    # evaluator equivalence on a random schedule
    from .generate import random_schedule
    from .moves import NeighborhoodConfig
    from .search import make_evaluator
    ev = make_evaluator(inst, args.evaluator)
    sched = random_schedule(args.seed, inst.n, inst.m)
    ev.load(sched)
    checked = 0
    for nbh in NeighborhoodConfig.for_machines(inst.m).neighborhoods(inst.m):
        rec = []
        ev.scan(nbh, rec)
        truth = {mv.key(): mv.cost for mv in enumerate_neighbors(sched, nbh, inst)}
        for mv in rec:
            checked += 1
            if truth.get(mv.key()) != mv.cost:
                ok = False
                lines.append(f"mismatch {mv}: oracle {truth.get(mv.key())}")
    lines.append(f"moves checked against the oracle: {checked}")
    capped = False
    best = None
    for s in range(args.seeds):
        rec, _ = _run(inst, _params(args, args.seed + s), bks=opt)
        capped |= rec.time_cap_hit
        best = rec.cost if best is None else min(best, rec.cost)
        lines.append(f"seed {rec.seed}: cost {rec.cost}")
    lines.append(f"best over seeds: {best} ({'optimal' if best == opt else 'not optimal'})")
    ok = ok and best == opt
    lines.append("PASS" if ok else "FAIL")
    _emit("\n".join(lines) + "\n", args.out)
    if not ok:
        return EXIT_FAIL
    return EXIT_TIMECAP if capped else EXIT_OK


def cmd_timing(args) -> int:
    inst = _prepare(args.instance, args)
    k = args.machine - 1
    if not 0 <= k < inst.m:
        print(f"machine must lie in 1..{inst.m}", file=sys.stderr)
        return EXIT_FAIL
    try:
        jobs = [int(t) for t in args.sequence.replace(",", " ").split()]
    except ValueError:
        print("sequence must list job numbers", file=sys.stderr)
        return EXIT_FAIL
    if len(set(jobs)) != len(jobs) or not all(1 <= j <= inst.n for j in jobs):
        print(f"sequence must list distinct jobs in 1..{inst.n}", file=sys.stderr)
        return EXIT_FAIL
    seq = [0] + jobs
    if inst.idle_allowed:
        starts, cost = optimal_timing(seq, k, inst)
    else:
        cost = sequence_cost(seq, k, inst)
        starts = [c - int(inst.p[j, k]) for j, c in zip(seq, completion_times(seq, k, inst))]
    out = {"machine": args.machine, "sequence": jobs, "starts": starts[1:],
           "completions": [s + int(inst.p[j, k]) for j, s in zip(jobs, starts[1:])], "cost": cost}
    _emit(json.dumps(out) + "\n", args.out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "verify": cmd_verify, "timing": cmd_timing}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OracleSizeError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ScheduleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
