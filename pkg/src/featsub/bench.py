"""Benchmark harness: every (instance, method) cell, per-method means, CSV."""
from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from .bnb import DOM_WDEG, LEVELS, SolverConfig, solve
from .instances import read_fsp
from .oracle import brute_force_optimal

METHODS = LEVELS + ("oracle",)
COLUMNS = ("instance", "method", "heuristic", "nodes", "ms", "optimum", "completed", "error")


@dataclass
class BenchRow:
    instance: str
    method: str
    heuristic: str
    nodes: float
    ms: float
    optimum: float | None
    completed: bool
    error: str = ""


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    means: list[BenchRow] = field(default_factory=list)
    disagreements: list[str] = field(default_factory=list)  # instances with conflicting optima

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS + ("agree",))
        for r in self.rows + self.means:
            opt = "" if r.optimum is None else _num(r.optimum)
            flag = "" if r.instance == "MEAN" else str(r.instance not in self.disagreements).lower()
            w.writerow([r.instance, r.method, r.heuristic, _num(r.nodes), f"{r.ms:.3f}", opt,
                        str(r.completed).lower(), r.error, flag])
        return buf.getvalue()


def _num(x) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.3f}"


def parse_method(spec: str) -> tuple[str, str]:
    """``rsac`` or ``rsac:dom-deg`` -> (level, heuristic)."""
    level, _, heur = spec.strip().partition(":")
    if level not in METHODS:
        raise ValueError(f"unknown method {level!r}; choose from {', '.join(METHODS)}")
    heur = (heur or DOM_WDEG).replace("-", "/")
    return level, ("-" if level == "oracle" else heur)


def run_cell(sub, level: str, heuristic: str, time_limit: float | None):
    if level == "oracle":
        t = time.perf_counter()
        value, _ = brute_force_optimal(sub)
        return 0, (time.perf_counter() - t) * 1000, value, True
    relax, stats = solve(sub, SolverConfig(level, heuristic, time_limit))
    return stats.nodes, stats.time * 1000, relax.value, stats.completed


def run_bench(directory, methods, time_limit: float | None = 60.0) -> BenchReport:
    paths = sorted(Path(directory).glob("*.fsp"))
    specs = [parse_method(m) if isinstance(m, str) else tuple(m) for m in methods]
    report = BenchReport()
    for path in paths:
        optima = set()
        for level, heur in specs:
            try:
                sub = read_fsp(path).subscription
                nodes, ms, opt, done = run_cell(sub, level, heur, time_limit)
                row = BenchRow(path.stem, level, heur, nodes, ms, opt, done)
                if done:
                    optima.add(opt)
            except Exception as exc:  # recorded, the run goes on
                row = BenchRow(path.stem, level, heur, 0, 0.0, None, False, f"{type(exc).__name__}: {exc}")
            report.rows.append(row)
        if len(optima) > 1:
            report.disagreements.append(path.stem)
    for level, heur in specs:
        rows = [r for r in report.rows if (r.method, r.heuristic) == (level, heur) and not r.error]
        if not rows:
            continue
        opts = [r.optimum for r in rows]
        report.means.append(BenchRow(
            "MEAN", level, heur,
            statistics.fmean(r.nodes for r in rows),
            statistics.fmean(r.ms for r in rows),
            statistics.fmean(opts),
            all(r.completed for r in rows),
        ))
    return report
