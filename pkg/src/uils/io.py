"""Instance text format, run records and result reports.

Instance grammar (one statement per line, ``#`` starts a comment)::

    UILS <n> <m>
    FLAGS setups=<0|1> releases=<0|1> idle=<0|1>
    [SPEEDS <v_1> ... <v_m>]
    JOB <j> <p_1> ... <p_m> <d> <r> <wE> <wT>     # j = 1..n, in order
    SETUP <k>                                    # k = 1..m, only with setups=1
    <n+1 rows of n+1 integers; row/column 0 is the dummy job>
    END

With ``SPEEDS`` each JOB line carries a single processing time ``p`` and
machine ``k`` runs it in ``ceil(p / v_k)``.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import fmean
from typing import Optional

import numpy as np

from .model import Instance, InstanceError

COLUMNS = ("instance", "seed", "cost_best", "cost_avg", "gap_pct", "time_to_best_s", "time_total_s")


class ParseError(InstanceError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _ints(tokens, line):
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line) from exc


def parse_instance(text: str, name: str = "") -> Instance:
    """Parse the canonical text format into a validated ``Instance``."""
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            lines.append((no, body))
    if not lines:
        raise ParseError("empty instance file")
    it = iter(lines)

    no, tok = next(it)
    if tok[0] != "UILS" or len(tok) != 3:
        raise ParseError("expected header 'UILS <n> <m>'", no)
    n, m = _ints(tok[1:], no)
    if n < 0 or m < 1:
        raise ParseError(f"invalid sizes n={n} m={m}", no)

    no, tok = _next(it, "FLAGS")
    if tok[0] != "FLAGS":
        raise ParseError("expected FLAGS line", no)
    flags = {}
    for item in tok[1:]:
        key, _, val = item.partition("=")
        if key not in ("setups", "releases", "idle") or val not in ("0", "1"):
            raise ParseError(f"bad flag {item!r}", no)
        flags[key] = val == "1"
    missing = {"setups", "releases", "idle"} - flags.keys()
    if missing:
        raise ParseError(f"missing flags: {', '.join(sorted(missing))}", no)

    speeds = None
    no, tok = _next(it, "JOB or END")
    if tok[0] == "SPEEDS":
        speeds = _ints(tok[1:], no)
        if len(speeds) != m or min(speeds) < 1:
            raise ParseError(f"SPEEDS needs {m} positive integers", no)
        no, tok = _next(it, "JOB or END")
    pending = (no, tok)  # first line after the header block

    width = 1 if speeds else m
    p = np.zeros((n, m), dtype=np.int64)
    d, r, we, wt = (np.zeros(n, dtype=np.int64) for _ in range(4))
    for j in range(1, n + 1):
        no, tok = pending if j == 1 else _next(it, "JOB")
        if tok[0] != "JOB":
            raise ParseError(f"expected JOB {j}", no)
        vals = _ints(tok[1:], no)
        if len(vals) != width + 5:
            raise ParseError(f"JOB line needs {width + 5} integers, got {len(vals)}", no)
        if vals[0] != j:
            raise ParseError(f"expected job {j}, got {vals[0]}", no)
        if speeds:
            p[j - 1] = [math.ceil(vals[1] / v) for v in speeds]
        else:
            p[j - 1] = vals[1:1 + m]
        d[j - 1], r[j - 1], we[j - 1], wt[j - 1] = vals[1 + width:]
    if not flags["releases"] and r.any():
        raise ParseError("non-zero release date with releases=0")

    setups = None
    if flags["setups"]:
        setups = np.zeros((m, n + 1, n + 1), dtype=np.int64)
        for k in range(1, m + 1):
            no, tok = pending if n == 0 and k == 1 else _next(it, f"SETUP {k}")
            if tok != ["SETUP", str(k)]:
                raise ParseError(f"expected 'SETUP {k}'", no)
            for row in range(n + 1):
                no, tok = _next(it, f"setup row {row} of machine {k}")
                vals = _ints(tok, no)
                if len(vals) != n + 1:
                    raise ParseError(f"setup row needs {n + 1} integers, got {len(vals)}", no)
                setups[k - 1, row] = vals

    if n == 0 and not flags["setups"]:
        no, tok = pending
    else:
        no, tok = _next(it, "END")
    if tok != ["END"]:
        raise ParseError(f"expected END, got {tok[0]!r}", no)
    extra = next(it, None)
    if extra is not None:
        raise ParseError("content after END", extra[0])
    try:
        return Instance.build(p, d, r=r, w_early=we, w_tardy=wt, setups=setups,
                              idle_allowed=flags["idle"], name=name)
    except InstanceError as exc:
        raise ParseError(str(exc)) from exc


def _next(it, expected: str):
    item = next(it, None)
    if item is None:
        raise ParseError(f"unexpected end of file (truncated?) while reading {expected}")
    return item


def write_instance(instance: Instance) -> str:
    n, m = instance.n, instance.m
    has_s = instance.s is not None
    out = [f"UILS {n} {m}",
           f"FLAGS setups={int(has_s)} releases={int(bool(instance.r.any()))} idle={int(instance.idle_allowed)}"]
    for j in range(1, n + 1):
        ps = " ".join(str(int(v)) for v in instance.p[j])
        out.append(f"JOB {j} {ps} {instance.d[j]} {instance.r[j]} {instance.w_early[j]} {instance.w_tardy[j]}")
    if has_s:
        for k in range(m):
            out.append(f"SETUP {k + 1}")
            out.extend(" ".join(str(int(v)) for v in row) for row in instance.s[k])
    out.append("END")
    return "\n".join(out) + "\n"


# Readers for other file layouts plug in here: ``fn(text, name) -> Instance``.
ADAPTERS = {"uils": parse_instance}


def register_adapter(fmt: str, reader) -> None:
    ADAPTERS[fmt] = reader


def load_instance(path, fmt: str = "uils") -> Instance:
    path = Path(path)
    try:
        reader = ADAPTERS[fmt]
    except KeyError:
        raise ValueError(f"no reader registered for format {fmt!r}") from None
    return reader(path.read_text(), name=path.stem)


# --------------------------------------------------------------------------

@dataclass
class RunRecord:
    instance: str
    seed: int
    cost: int
    time_to_best_s: float
    time_total_s: float
    restarts_completed: int
    time_cap_hit: bool = False
    evaluator: str = ""
    params: dict = field(default_factory=dict)
    bks: Optional[int] = None

    @classmethod
    def from_result(cls, instance, params, result, bks=None) -> "RunRecord":
        """Record of one ``uils`` run (``params`` is the ``IlsParams`` used)."""
        return cls(
            instance=instance.name, seed=params.seed, cost=result.cost,
            time_to_best_s=result.time_to_best_s, time_total_s=result.time_total_s,
            restarts_completed=result.restarts_completed, time_cap_hit=result.time_cap_hit,
            evaluator=result.evaluator,
            params={"restarts": params.restarts, "iils": params.max_non_improving(instance),
                    "time_limit": params.time_limit, "rcl_alpha": params.rcl_alpha},
            bks=bks,
        )

    @property
    def gap_pct(self) -> Optional[float]:
        return gap(self.cost, self.bks)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["gap_pct"] = self.gap_pct
        return out


def gap(cost, ref) -> Optional[float]:
    """Relative excess in percent; undefined without a positive reference."""
    if ref is None or ref <= 0:
        return None
    return 100.0 * (cost - ref) / ref


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.4f}"
    return str(x)


def aggregate(records) -> list:
    """One row per instance (first-seen order) in the report columns."""
    groups: dict = {}
    for rec in records:
        groups.setdefault(rec.instance, []).append(rec)
    rows = []
    for name, recs in groups.items():
        best = min(recs, key=lambda r: (r.cost, r.seed))
        rows.append({
            "instance": name,
            "seed": best.seed,
            "cost_best": best.cost,
            "cost_avg": fmean(r.cost for r in recs),
            "gap_pct": gap(best.cost, best.bks),
            "time_to_best_s": fmean(r.time_to_best_s for r in recs),
            "time_total_s": fmean(r.time_total_s for r in recs),
        })
    return rows


def report(records, fmt: str = "csv") -> str:
    records = list(records)
    if not records:
        raise ValueError("report needs at least one record")
    rows = aggregate(records)
    if fmt == "json":
        return json.dumps({"summary": rows, "runs": [r.to_dict() for r in records]}, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in COLUMNS])
    return buf.getvalue()


def read_bks(path) -> dict:
    """``instance,bks`` CSV (header optional) into a dict."""
    out = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "instance":
                continue
            out[row[0]] = int(row[1])
    return out
