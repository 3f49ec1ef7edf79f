"""Language-aided subset-sampling planner and the plain RRT baseline."""

from __future__ import annotations

import dataclasses
import math
import time
import zlib
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ..gridmap import OccupancyGrid, Pose, State, is_free, normalize_angle, segment_valid
from ..grounding import NavCommand
from .geometry import (
    detect_intersection,
    get_subset,
    heading_after,
    sample_subset,
    turn_to_direction,
)
from .tree import Path, SearchTree, extract_path, nearest_node

RNG_ALGORITHM = "numpy.PCG64"


class PlanningError(ValueError):
    pass


@dataclass(frozen=True)
class PlannerParams:
    h: float = 4.0
    w: float = 2.0
    d: float = 3.0
    delta: float | None = None  # None -> grid resolution
    n_cons: int = 3
    max_step: float = 1.0
    goal_tol: float = 0.3
    max_iters: int = 10000
    seed: int = 0
    # after a consumed command, the next one cannot complete until the robot has
    # advanced this far along the new heading (the corridor just left is not an opening)
    turn_clearance: float = 1.2
    # the sampling rectangle is centred this far ahead of its anchor node
    lead: float = 0.0

    def __post_init__(self):
        if not self.h > self.w > 0:
            raise ValueError("subset size must satisfy h > w > 0")
        if not self.d > 0:
            raise ValueError("ray range d must be positive")
        if self.delta is not None and not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.n_cons < 1:
            raise ValueError("n_cons must be at least 1")
        if not self.goal_tol > 0 or not self.max_step > 0:
            raise ValueError("goal_tol and max_step must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if not 0 <= self.lead <= self.h / 2:
            raise ValueError("lead must lie in [0, h/2]")
        if self.turn_clearance < 0:
            raise ValueError("turn_clearance must be non-negative")

    def resolved(self, grid: OccupancyGrid) -> "PlannerParams":
        if self.delta is None:
            return dataclasses.replace(self, delta=grid.resolution)
        return self

    def replace(self, **changes) -> "PlannerParams":
        return dataclasses.replace(self, **changes)


@dataclass
class PlannerMetrics:
    nodes_added: int = 0
    sample_queries: int = 0
    elapsed: float = 0.0
    path_length: float = 0.0
    success: bool = False
    iterations: int = 0


class PlanResult(NamedTuple):
    path: Path
    metrics: PlannerMetrics
    tree: SearchTree


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(seed: int, *labels: str) -> int:
    """64-bit run seed from a user seed and string labels (scenario id, planner name)."""
    entropy = [seed & 0xFFFFFFFFFFFFFFFF] + [zlib.crc32(s.encode("utf-8")) for s in labels]
    lo, hi = np.random.SeedSequence(entropy).generate_state(2, np.uint32)
    return int(hi) << 32 | int(lo)


def steer(x_near, x_rand, max_step: float) -> State | None:
    dx, dy = x_rand[0] - x_near[0], x_rand[1] - x_near[1]
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        return None
    if dist <= max_step:
        return State(float(x_rand[0]), float(x_rand[1]))
    f = max_step / dist
    return State(x_near[0] + f * dx, x_near[1] + f * dy)


def _check_endpoints(grid, start: Pose, goal: Pose):
    if not is_free(grid, start.position):
        raise PlanningError(f"start {tuple(start.position)} is in collision")
    if not is_free(grid, goal.position):
        raise PlanningError(f"goal {tuple(goal.position)} is in collision")


def _try_goal(grid, tree, idx, goal: State, params, metrics) -> int | None:
    """Goal test for a fresh node; attempts a direct connection when within one step.

    The connection attempt counts as one query (the goal is handed out as a sample).
    """
    x_new = tree.node(idx)
    dist = math.dist(x_new, goal)
    if dist <= params.goal_tol:
        return idx
    if dist <= params.max_step:
        metrics.sample_queries += 1
        if segment_valid(grid, x_new, goal):
            metrics.nodes_added += 1
            return tree.add(goal, idx)
    return None


def _finish(tree, goal_idx, metrics, t0) -> PlanResult:
    if goal_idx is None:
        path = Path()
        metrics.success = False
    else:
        path = extract_path(tree, goal_idx)
        metrics.success = True
        metrics.path_length = path.length
    metrics.elapsed = time.perf_counter() - t0
    return PlanResult(path, metrics, tree)


def plan_lasmp(grid: OccupancyGrid, start: Pose, goal: Pose, turns: Sequence[NavCommand],
               params: PlannerParams = PlannerParams()) -> PlanResult:
    """Grow a tree inside a heading-aligned rectangle, consuming ``turns`` in order.

    Each command is consumed at the first tree extension whose intermediate states
    show ``n_cons`` consecutive free rays toward the commanded side; the new node
    becomes the root of the next sub-problem and the sampling rectangle is rebuilt
    there with the updated heading. Between turns the rectangle follows the node that
    has advanced furthest along the heading.
    """
    params = params.resolved(grid)
    _check_endpoints(grid, start, goal)
    t0 = time.perf_counter()
    rng = make_rng(params.seed)
    metrics = PlannerMetrics()
    tree = SearchTree(start.position)
    goal_xy = goal.position
    pending = list(turns)
    heading = start.yaw

    if not pending and math.dist(start.position, goal_xy) <= params.goal_tol:
        return _finish(tree, 0, metrics, t0)

    level = 0
    subroot = start.position
    front = 0.0
    goal_idx = None

    def advance(p):
        return (p[0] - subroot[0]) * math.cos(heading) + (p[1] - subroot[1]) * math.sin(heading)

    def blocked(p):
        # a command completes only ahead of the sub-problem root, and after a turn
        # only once the robot has moved turn_clearance along the new heading
        return advance(p) < (params.turn_clearance if level else 0.0)

    def subset_on_axis(ahead):
        # rectangle stays on the sub-problem axis: turn node + ahead * heading
        x0, y0, x1, y1 = grid.bounds
        cx = min(max(subroot[0] + ahead * math.cos(heading), x0), x1)
        cy = min(max(subroot[1] + ahead * math.sin(heading), y0), y1)
        return get_subset((cx, cy), params, heading, grid)

    subset = subset_on_axis(params.lead)

    for _ in range(params.max_iters):
        metrics.iterations += 1
        x_rand = sample_subset(subset, rng, metrics)
        near = nearest_node(tree, x_rand, level)
        x_near = tree.node(near)
        x_target = steer(x_near, x_rand, params.max_step)
        if x_target is None or not segment_valid(grid, x_near, x_target):
            continue
        event = None
        if pending:
            v = turn_to_direction(heading, pending[0])
            x_new, f_turn = detect_intersection(
                grid, x_near, x_target, v, params, blocked
            )
            if f_turn:
                # the truncated edge gets its own check at the edge's sample spacing
                if not segment_valid(grid, x_near, x_new):
                    continue
                event = pending.pop(0)
        else:
            x_new = x_target
        idx = tree.add(x_new, near, event)
        metrics.nodes_added += 1

        if event is not None:
            heading = normalize_angle(heading_after(heading, event))
            level += 1
            subroot = x_new
            front = 0.0
            subset = subset_on_axis(params.lead)
        else:
            adv = advance(x_new)
            if adv > front:
                front = adv
                subset = subset_on_axis(front + params.lead)

        if not pending:
            goal_idx = _try_goal(grid, tree, idx, goal_xy, params, metrics)
            if goal_idx is not None:
                break
    return _finish(tree, goal_idx, metrics, t0)


def plan_rrt(grid: OccupancyGrid, start: Pose, goal: Pose,
             params: PlannerParams = PlannerParams()) -> PlanResult:
    """Classical RRT over the whole map with the same extension, goal test and counting."""
    params = params.resolved(grid)
    _check_endpoints(grid, start, goal)
    t0 = time.perf_counter()
    rng = make_rng(params.seed)
    metrics = PlannerMetrics()
    tree = SearchTree(start.position)
    goal_xy = goal.position

    if math.dist(start.position, goal_xy) <= params.goal_tol:
        return _finish(tree, 0, metrics, t0)

    x0, y0, x1, y1 = grid.bounds
    goal_idx = None
    for _ in range(params.max_iters):
        metrics.iterations += 1
        metrics.sample_queries += 1
        x_rand = State(x0 + (x1 - x0) * rng.random(), y0 + (y1 - y0) * rng.random())
        near = nearest_node(tree, x_rand)
        x_near = tree.node(near)
        x_new = steer(x_near, x_rand, params.max_step)
        if x_new is None or not segment_valid(grid, x_near, x_new):
            continue
        idx = tree.add(x_new, near)
        metrics.nodes_added += 1
        goal_idx = _try_goal(grid, tree, idx, goal_xy, params, metrics)
        if goal_idx is not None:
            break
    return _finish(tree, goal_idx, metrics, t0)


PLANNERS = {
    "lasmp": lambda grid, start, goal, turns, params: plan_lasmp(grid, start, goal, turns, params),
    "rrt": lambda grid, start, goal, turns, params: plan_rrt(grid, start, goal, params),
}
