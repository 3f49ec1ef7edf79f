"""Seeded planner comparisons, run logs and summary reports."""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .planner import PLANNERS, RNG_ALGORITHM, Path, PlannerMetrics, PlanningError, derive_seed
from .scenario import Scenario

RUN_FIELDS = (
    "scenario", "planner", "seed", "rng_seed", "success", "nodes", "queries",
    "path_length", "elapsed", "iterations", "error",
)
METRICS = (
    ("nodes", "nodes_added"),
    ("queries", "sample_queries"),
    ("length", "path_length"),
    ("time", "elapsed"),
)
AGGREGATE = "ALL"


@dataclass
class ComparisonRecord:
    scenario: str
    planner: str
    seed: int
    metrics: PlannerMetrics
    rng_seed: int = 0
    error: str | None = None
    path: Path | None = field(default=None, compare=False, repr=False)

    @property
    def success(self) -> bool:
        return self.error is None and self.metrics.success

    def sort_key(self):
        return (self.scenario, self.planner, self.seed)


def run_comparison(scenarios: Scenario | Iterable[Scenario], planners: Sequence[str] = ("lasmp", "rrt"),
                   seeds: Iterable[int] = range(10), keep_paths: bool = False) -> list[ComparisonRecord]:
    """One record per (scenario, planner, seed), sorted.

    The instruction is grounded once per scenario. Every run gets its own generator
    seeded from (seed, scenario id, planner name), so runs never share RNG state.
    Planner and grounding errors become failed records.
    """
    if isinstance(scenarios, Scenario):
        scenarios = [scenarios]
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    for name in planners:
        if name not in PLANNERS:
            raise ValueError(f"unknown planner {name!r}")

    records = []
    for sc in scenarios:
        try:
            turns, goal = sc.resolve()
            ground_error = None
        except ValueError as exc:
            turns, goal, ground_error = (), sc.goal, f"grounding: {exc}"
        for name in planners:
            for seed in seeds:
                rng_seed = derive_seed(seed, sc.id, name)
                if ground_error is not None:
                    records.append(ComparisonRecord(sc.id, name, seed, PlannerMetrics(), rng_seed, ground_error))
                    continue
                params = sc.params.replace(seed=rng_seed)
                try:
                    res = PLANNERS[name](sc.grid, sc.start, goal, turns, params)
                except PlanningError as exc:
                    records.append(ComparisonRecord(sc.id, name, seed, PlannerMetrics(), rng_seed, str(exc)))
                    continue
                error = None if res.metrics.success else "iteration budget exhausted"
                path = res.path if keep_paths and res.metrics.success else None
                records.append(ComparisonRecord(sc.id, name, seed, res.metrics, rng_seed, error, path))
    records.sort(key=ComparisonRecord.sort_key)
    return records


def write_runs(records: Iterable[ComparisonRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUN_FIELDS)
    for r in sorted(records, key=ComparisonRecord.sort_key):
        m = r.metrics
        w.writerow([
            r.scenario, r.planner, r.seed, r.rng_seed, int(r.success), m.nodes_added,
            m.sample_queries, repr(m.path_length), repr(m.elapsed), m.iterations, r.error or "",
        ])
    return buf.getvalue()


def read_runs(text: str) -> list[ComparisonRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        m = PlannerMetrics(
            nodes_added=int(row["nodes"]),
            sample_queries=int(row["queries"]),
            elapsed=float(row["elapsed"]),
            path_length=float(row["path_length"]),
            success=row["success"] == "1",
            iterations=int(row["iterations"]),
        )
        out.append(ComparisonRecord(row["scenario"], row["planner"], int(row["seed"]), m,
                                    int(row["rng_seed"]), row["error"] or None))
    return out


@dataclass(frozen=True)
class Stat:
    mean: float
    std: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "Stat":
        if not values:
            return cls(math.nan, math.nan)
        return cls(statistics.fmean(values), statistics.pstdev(values))


@dataclass(frozen=True)
class GroupSummary:
    scenario: str
    planner: str
    runs: int
    failures: int
    stats: dict[str, Stat]


def reduction(candidate: float, reference: float) -> float:
    """Percentage by which ``candidate`` undercuts ``reference``."""
    if not reference > 0 or math.isnan(candidate):
        return math.nan
    return 100.0 * (1.0 - candidate / reference)


def _fmt(v: float, spec: str) -> str:
    return "n/a" if math.isnan(v) else format(v, spec)


@dataclass
class Report:
    groups: list[GroupSummary]
    candidate: str = "lasmp"
    reference: str = "rrt"

    def group(self, scenario: str, planner: str) -> GroupSummary | None:
        for g in self.groups:
            if g.scenario == scenario and g.planner == planner:
                return g
        return None

    @property
    def scenarios(self) -> list[str]:
        return sorted({g.scenario for g in self.groups if g.scenario != AGGREGATE})

    def reductions(self, scenario: str) -> dict[str, float]:
        """Node/query reduction (%) of the candidate planner against the reference."""
        c, r = self.group(scenario, self.candidate), self.group(scenario, self.reference)
        if c is None or r is None:
            return {"nodes": math.nan, "queries": math.nan}
        return {k: reduction(c.stats[k].mean, r.stats[k].mean) for k in ("nodes", "queries")}

    @property
    def aggregate(self) -> dict[str, float]:
        return self.reductions(AGGREGATE)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["scenario", "planner", "runs", "failures"]
        for key, _ in METRICS:
            head += [f"{key}_mean", f"{key}_std"]
        w.writerow(head + ["node_reduction_pct", "query_reduction_pct"])
        for g in self.groups:
            row = [g.scenario, g.planner, g.runs, g.failures]
            for key, _ in METRICS:
                row += [repr(g.stats[key].mean), repr(g.stats[key].std)]
            if g.planner == self.candidate:
                red = self.reductions(g.scenario)
                row += [repr(red["nodes"]), repr(red["queries"])]
            else:
                row += ["", ""]
            w.writerow(row)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            "# means and population standard deviations over successful runs; failed runs are counted, not averaged",
            f"# rng: {RNG_ALGORITHM}, one generator per run seeded from (seed, scenario id, planner)",
            f"# reduction% = 100 * (1 - mean {self.candidate} / mean {self.reference}); {AGGREGATE} pools every successful run",
        ]
        head = ["scenario", "planner", "runs", "fail", "nodes", "queries", "length[m]", "time[ms]"]
        rows = []
        for g in self.groups:
            s = g.stats
            rows.append([
                g.scenario, g.planner, str(g.runs), str(g.failures),
                f"{_fmt(s['nodes'].mean, '.1f')} ± {_fmt(s['nodes'].std, '.1f')}",
                f"{_fmt(s['queries'].mean, '.1f')} ± {_fmt(s['queries'].std, '.1f')}",
                f"{_fmt(s['length'].mean, '.2f')} ± {_fmt(s['length'].std, '.2f')}",
                f"{_fmt(s['time'].mean * 1e3, '.2f')} ± {_fmt(s['time'].std * 1e3, '.2f')}",
            ])
        widths = [max(len(r[i]) for r in rows + [head]) for i in range(len(head))]
        fmt_row = lambda r: "  ".join(c.ljust(wd) if i < 2 else c.rjust(wd) for i, (c, wd) in enumerate(zip(r, widths)))
        lines.append(fmt_row(head).rstrip())
        lines.append("  ".join("-" * wd for wd in widths))
        lines += [fmt_row(r).rstrip() for r in rows]
        lines.append("")
        lines.append("reductions (%)   nodes  queries")
        for sc in self.scenarios + [AGGREGATE]:
            red = self.reductions(sc)
            lines.append(f"{sc:<14} {_fmt(red['nodes'], '7.1f'):>7}  {_fmt(red['queries'], '7.1f'):>7}")
        return "\n".join(lines) + "\n"


def summarize(records: Sequence[ComparisonRecord], candidate: str = "lasmp", reference: str = "rrt") -> Report:
    if not records:
        raise ValueError("no records to summarize")
    by_group: dict[tuple[str, str], list[ComparisonRecord]] = {}
    for r in records:
        by_group.setdefault((r.scenario, r.planner), []).append(r)
        by_group.setdefault((AGGREGATE, r.planner), []).append(r)

    def key(k):
        return (k[0] == AGGREGATE, k[0], k[1])

    groups = []
    for (sc, planner) in sorted(by_group, key=key):
        recs = by_group[(sc, planner)]
        ok = [r for r in recs if r.success]
        stats = {name: Stat.of([getattr(r.metrics, attr) for r in ok]) for name, attr in METRICS}
        groups.append(GroupSummary(sc, planner, len(recs), len(recs) - len(ok), stats))
    return Report(groups, candidate, reference)
