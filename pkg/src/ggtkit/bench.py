"""Benchmark harness: sweeps, CSV records, and scaling-exponent fits."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from ggtkit.checker import INPUT_LEMMA, POOL, REGULAR, VALID, check_proof
from ggtkit.formulas import gen_ggt, gen_gt
from ggtkit.gtproofs import build_pn
from ggtkit.lr_engine import NodeBudgetExceeded, build_pool_with_stats, build_regrti_with_stats
from ggtkit.solver import solve

ARTIFACTS = ("pn", "pool", "regrti", "dpll")

CSV_COLUMNS = (
    "family",
    "n",
    "seed",
    "artifact",
    "lines",
    "maxWidth",
    "stages",
    "caseIvCount",
    "conflicts",
    "decisions",
    "wallMillis",
    "status",
)

OK = "ok"
TIMEOUT = "TIMEOUT"


@dataclass
class BenchRecord:
    family: str
    n: int
    seed: int
    artifact: str
    lines: int = 0
    maxWidth: int = 0
    stages: int = 0
    caseIvCount: int = 0
    conflicts: int = 0
    decisions: int = 0
    wallMillis: int = 0
    status: str = OK

    def row(self) -> list[str]:
        return [str(getattr(self, col)) for col in CSV_COLUMNS]


class BenchError(RuntimeError):
    pass


def fit_slope(points) -> float | None:
    """Least-squares slope of log(y) against log(x); needs two points."""
    pts = [(math.log(x), math.log(y)) for x, y in points if x > 0 and y > 0]
    if len(pts) < 2:
        return None
    xm = sum(x for x, _ in pts) / len(pts)
    ym = sum(y for _, y in pts) / len(pts)
    den = sum((x - xm) ** 2 for x, _ in pts)
    if den == 0:
        return None
    return sum((x - xm) * (y - ym) for x, y in pts) / den


def run_one(artifact: str, n: int, seed: int, node_budget: int | None = None,
            time_cap: float | None = None) -> BenchRecord:
    start = time.monotonic()
    rec = BenchRecord(family="gt" if artifact == "pn" else "ggt", n=n, seed=seed,
                      artifact=artifact)
    try:
        if artifact == "pn":
            d = build_pn(n)
            report = check_proof(d, gen_gt(n), (VALID, REGULAR))
            if not report.ok:
                raise BenchError(f"pn self-check failed: {report.lines()[:3]}")
            rec.lines, rec.maxWidth = len(d), d.max_width()
        elif artifact == "pool":
            d, st = build_pool_with_stats(n, seed, max_nodes=node_budget)
            report = check_proof(d, gen_ggt(n, seed), (VALID, REGULAR, POOL))
            if not report.ok:
                raise BenchError(f"pool self-check failed: {report.lines()[:3]}")
            rec.lines, rec.maxWidth = st.lines, st.max_width
            rec.stages, rec.caseIvCount = st.stages, st.case_iv
        elif artifact == "regrti":
            d, st = build_regrti_with_stats(n, seed, max_nodes=node_budget)
            report = check_proof(d, gen_ggt(n, seed), (VALID, REGULAR, POOL, INPUT_LEMMA))
            if not report.ok:
                raise BenchError(f"regrti self-check failed: {report.lines()[:3]}")
            rec.lines, rec.maxWidth = st.lines, st.max_width
            rec.stages, rec.caseIvCount = st.stages, st.case_iv
        elif artifact == "dpll":
            result = solve(gen_ggt(n, seed))
            rec.conflicts = result.stats.conflicts
            rec.decisions = result.stats.decisions
        else:
            raise BenchError(f"unknown artifact {artifact!r}")
    except NodeBudgetExceeded:
        rec.status = TIMEOUT
    elapsed = time.monotonic() - start
    rec.wallMillis = int(elapsed * 1000)
    if time_cap is not None and elapsed > time_cap:
        rec.status = TIMEOUT
    return rec


def bench_run(ns, seeds, artifacts, node_budget: int | None = 4_000_000,
              time_cap: float | None = 300.0, wall: bool = True):
    """Run the sweep; returns (records, summary lines).

    Exceeding a resource cap degrades the run to a TIMEOUT row instead of
    aborting the sweep.  With wall=False the wallMillis column is zeroed
    so repeated identical plans produce byte-identical CSV files.
    """
    records = []
    for artifact in artifacts:
        for n in ns:
            for seed in seeds:
                rec = run_one(artifact, n, seed, node_budget, time_cap)
                if not wall:
                    rec.wallMillis = 0
                records.append(rec)
    return records, summarize(records)


def summarize(records) -> list[str]:
    lines = []
    for artifact in ARTIFACTS:
        good = [r for r in records if r.artifact == artifact and r.status == OK and r.n >= 6]
        if not good:
            continue
        best = {}
        for r in good:
            best.setdefault((r.n, r.seed), r)
        pts = list(best.values())
        if artifact == "dpll":
            slope = fit_slope([(r.n, r.conflicts) for r in pts])
            if slope is not None:
                lines.append(f"slope {artifact} conflicts: {slope:.2f}")
        else:
            slope = fit_slope([(r.n, r.lines) for r in pts])
            wslope = fit_slope([(r.n, r.maxWidth) for r in pts])
            if slope is not None:
                lines.append(f"slope {artifact} lines: {slope:.2f}")
            if wslope is not None:
                lines.append(f"slope {artifact} maxWidth: {wslope:.2f}")
    return lines


def to_csv(records) -> str:
    out = [",".join(CSV_COLUMNS)]
    out.extend(",".join(rec.row()) for rec in records)
    return "\n".join(out) + "\n"
