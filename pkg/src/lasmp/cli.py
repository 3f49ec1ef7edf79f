"""Command line: ground, plan, bench, follow.

Exit status is 0 on success, 1 on bad input (unreadable files, ungroundable text,
invalid scenarios) and 2 when planning or path following fails.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path as FsPath

from . import __version__
from .bench import run_comparison, summarize, write_runs
from .gridmap import Pose
from .grounding import GroundingError, extract_entities
from .planner import PLANNERS, Path, PlanningError, derive_seed
from .postprocess import ROBOTS, simulate_follow, smooth_for_tracking, smooth_path
from .render import render
from .scenario import SUITE, Scenario, ScenarioError, bundled_path, read_scenario

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


class InputError(Exception):
    pass


def _scenario(ref: str) -> Scenario:
    """A scenario file path, or the name of a bundled scenario such as ``de_3``."""
    path = FsPath(ref)
    if not path.is_file():
        bundled = bundled_path(ref)
        if not bundled.is_file():
            raise InputError(f"no such scenario: {ref}")
        path = bundled
    try:
        return read_scenario(path)
    except (ScenarioError, GroundingError, ValueError, OSError) as exc:
        raise InputError(f"{ref}: {exc}") from None


def _write(path: str | None, text: str):
    if path is None:
        return
    try:
        FsPath(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def cmd_ground(args) -> int:
    if args.scenario:
        sc = _scenario(args.scenario)
        grounded = extract_entities(args.text, sc.lexicon)
    else:
        sc, grounded = None, extract_entities(args.text)
    if not grounded.valid:
        raise InputError(f"ungroundable instruction: {args.text!r}")
    print("entities: " + " ".join(grounded.labels))
    if sc is None:
        print("turns: " + ",".join(t.name.lower() for t in grounded.turns))
        return EXIT_OK
    sc.instruction, sc.turns = args.text, None
    try:
        turns, goal = sc.resolve()
    except (GroundingError, ScenarioError) as exc:
        raise InputError(str(exc)) from None
    print("turns: " + ",".join(t.name.lower() for t in turns))
    print(f"goal: {goal.position.x:.9g} {goal.position.y:.9g} {goal.yaw:.9g}")
    return EXIT_OK


def cmd_plan(args) -> int:
    sc = _scenario(args.scenario)
    try:
        turns, goal = sc.resolve()
    except (GroundingError, ScenarioError) as exc:
        raise InputError(str(exc)) from None
    params = sc.params.replace(seed=derive_seed(args.seed, sc.id, args.planner))
    if args.max_iters is not None:
        params = params.replace(max_iters=args.max_iters)
    try:
        res = PLANNERS[args.planner](sc.grid, sc.start, goal, turns, params)
    except PlanningError as exc:
        print(f"planning error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    m = res.metrics
    print(f"scenario={sc.id} planner={args.planner} seed={args.seed} success={int(m.success)} "
          f"nodes={m.nodes_added} queries={m.sample_queries} length={m.path_length:.6f}")
    print(f"elapsed={m.elapsed:.6f}s", file=sys.stderr)
    _write(args.out_plot, render(sc.raw_grid, res.tree, res.path if m.success else None, sc.start, goal))
    if not m.success:
        print("no path within the iteration budget", file=sys.stderr)
        return EXIT_FAILED
    _write(args.out_path, res.path.to_text())
    return EXIT_OK


def cmd_bench(args) -> int:
    refs = args.scenario or list(SUITE)
    scenarios = [_scenario(r) for r in refs]
    if args.seeds < 1:
        raise InputError("--seeds must be at least 1")
    records = run_comparison(scenarios, args.planners, range(args.seeds))
    report = summarize(records)
    _write(args.runs_out, write_runs(records))
    _write(args.report_out, report.to_text())
    if args.summary_csv:
        _write(args.summary_csv, report.to_csv())
    sys.stdout.write(report.to_text())
    return EXIT_OK


def cmd_follow(args) -> int:
    try:
        path = Path.from_text(FsPath(args.path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read path {args.path}: {exc}") from None
    if len(path.states) < 2:
        raise InputError("path needs at least 2 states")
    if args.scenario:
        sc = _scenario(args.scenario)
        smooth = smooth_for_tracking(path, sc.grid)
        start = sc.start
    else:
        smooth = smooth_path(path)
        (x0, y0), (x1, y1) = path.states[0], path.states[1]
        start = Pose.of(x0, y0, math.atan2(y1 - y0, x1 - x0))
    traj = simulate_follow(smooth, start, ROBOTS[args.robot], lookahead=args.lookahead, dt=args.dt)
    _write(args.out, traj.to_text())
    print(f"robot={args.robot} reached={int(traj.reached)} steps={len(traj.times)} "
          f"max_cross_track_error={traj.max_cross_track_error:.6f}")
    return EXIT_OK if traj.reached else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lasmp", description="Language-aided subset-sampling motion planning.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("ground", help="extract navigation commands from an instruction")
    g.add_argument("text")
    g.add_argument("--scenario", help="scenario file or bundled name, for zones and routes")
    g.set_defaults(func=cmd_ground)

    pl = sub.add_parser("plan", help="plan one scenario")
    pl.add_argument("--scenario", required=True)
    pl.add_argument("--planner", choices=sorted(PLANNERS), default="lasmp")
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--max-iters", type=int)
    pl.add_argument("--out-path")
    pl.add_argument("--out-plot", help="SVG drawing of the tree and path")
    pl.set_defaults(func=cmd_plan)

    b = sub.add_parser("bench", help="seeded comparison of the planners")
    b.add_argument("--scenario", nargs="+", help="defaults to the bundled suite")
    b.add_argument("--seeds", type=int, default=10)
    b.add_argument("--planners", nargs="+", choices=sorted(PLANNERS), default=["lasmp", "rrt"])
    b.add_argument("--runs-out", help="per-run CSV")
    b.add_argument("--report-out", help="text report")
    b.add_argument("--summary-csv", help="summary CSV")
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("follow", help="smooth a path and simulate a robot tracking it")
    f.add_argument("--path", required=True)
    f.add_argument("--robot", choices=sorted(ROBOTS), default="turtlebot3")
    f.add_argument("--out", help="trajectory file: t x y yaw e_ct per line")
    f.add_argument("--scenario", help="use the scenario's start pose and inflated grid")
    f.add_argument("--lookahead", type=float, default=0.5)
    f.add_argument("--dt", type=float, default=0.02)
    f.set_defaults(func=cmd_follow)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
