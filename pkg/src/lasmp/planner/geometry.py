"""Subset construction/sampling, turn directions and intersection detection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..gridmap import OccupancyGrid, State, ray_cast_free
from ..grounding import NavCommand

# heading offset for each command; NR/NL watch the forbidden side
TURN_OFFSETS = {
    NavCommand.STRAIGHT: 0.0,
    NavCommand.LEFT: math.pi / 2,
    NavCommand.RIGHT: -math.pi / 2,
    NavCommand.BACKWARD: math.pi,
    NavCommand.NL: math.pi / 2,
    NavCommand.NR: -math.pi / 2,
}


def turn_to_direction(heading: float, cmd: NavCommand) -> tuple[float, float]:
    a = heading + TURN_OFFSETS[cmd]
    return (math.cos(a), math.sin(a))


def heading_after(heading: float, cmd: NavCommand) -> float:
    """Travel heading once ``cmd`` has been executed (prohibitions leave it unchanged)."""
    if cmd.is_prohibition:
        return heading
    return heading + TURN_OFFSETS[cmd]


def _clip_halfplane(poly, inside, intersect):
    out = []
    n = len(poly)
    for k in range(n):
        cur, nxt = poly[k], poly[(k + 1) % n]
        cin, nin = inside(cur), inside(nxt)
        if cin:
            out.append(cur)
            if not nin:
                out.append(intersect(cur, nxt))
        elif nin:
            out.append(intersect(cur, nxt))
    return out


def clip_to_box(poly, bounds) -> list[tuple[float, float]]:
    """Sutherland-Hodgman clip of a convex polygon to an axis-aligned box."""
    x0, y0, x1, y1 = bounds

    def at_x(xc):
        def f(p, q):
            t = (xc - p[0]) / (q[0] - p[0])
            return (xc, p[1] + t * (q[1] - p[1]))
        return f

    def at_y(yc):
        def f(p, q):
            t = (yc - p[1]) / (q[1] - p[1])
            return (p[0] + t * (q[0] - p[0]), yc)
        return f

    out = list(poly)
    for inside, cut in (
        (lambda p: p[0] >= x0, at_x(x0)),
        (lambda p: p[0] <= x1, at_x(x1)),
        (lambda p: p[1] >= y0, at_y(y0)),
        (lambda p: p[1] <= y1, at_y(y1)),
    ):
        if not out:
            break
        out = _clip_halfplane(out, inside, cut)
    return out


def polygon_area(poly) -> float:
    if len(poly) < 3:
        return 0.0
    p = np.asarray(poly, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


@dataclass(frozen=True)
class SamplingSubset:
    center: State
    half_w: float
    half_h: float
    heading: float
    vertices: tuple  # unclipped rectangle corners
    clipped_polygon: tuple  # counter-clockwise after clipping

    @property
    def area(self) -> float:
        return polygon_area(self.clipped_polygon)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        p = np.asarray(self.clipped_polygon)
        return (p[:, 0].min(), p[:, 1].min(), p[:, 0].max(), p[:, 1].max())

    def contains(self, pt, eps: float = 1e-12) -> bool:
        poly = self.clipped_polygon
        n = len(poly)
        if n < 3:
            return False
        px, py = pt[0], pt[1]
        for k in range(n):
            ax, ay = poly[k]
            bx, by = poly[(k + 1) % n]
            if (bx - ax) * (py - ay) - (by - ay) * (px - ax) < -eps:
                return False
        return True


def _bounds_of(domain):
    if domain is None:
        return None
    if hasattr(domain, "bounds"):
        return domain.bounds
    return tuple(domain)


def get_subset(x, params, heading: float, grid=None) -> SamplingSubset:
    """Rectangle of ``params.w`` x ``params.h`` centred on ``x``, long side along ``heading``.

    With heading pi/2 the corners are x +/- [w/2, h/2] and x +/- [w/2, -h/2].
    ``grid`` (an OccupancyGrid or an (xmin, ymin, xmax, ymax) box) clips the rectangle;
    None means an unbounded domain.
    """
    bounds = _bounds_of(grid)
    cx, cy = float(x[0]), float(x[1])
    if bounds is not None and not (bounds[0] <= cx <= bounds[2] and bounds[1] <= cy <= bounds[3]):
        raise ValueError(f"subset anchor {cx, cy} lies outside the domain")
    hw, hh = params.w / 2.0, params.h / 2.0
    theta = heading - math.pi / 2
    c, s = math.cos(theta), math.sin(theta)
    offsets = ((hw, hh), (hw, -hh), (-hw, -hh), (-hw, hh))
    verts = tuple((cx + c * ox - s * oy, cy + s * ox + c * oy) for ox, oy in offsets)
    # offsets run clockwise; reverse for a CCW polygon
    poly = list(reversed(verts))
    if bounds is not None:
        poly = clip_to_box(poly, bounds)
    return SamplingSubset(State(cx, cy), hw, hh, heading, verts, tuple(poly))


def sample_subset(subset: SamplingSubset, rng: np.random.Generator, metrics=None) -> State:
    """Uniform draw from the clipped subset by bounding-box rejection.

    One call is one query to the random state generator; ``metrics.sample_queries``
    is incremented when a metrics object is given.
    """
    if len(subset.clipped_polygon) < 3:
        raise ValueError("cannot sample an empty subset")
    if metrics is not None:
        metrics.sample_queries += 1
    x0, y0, x1, y1 = subset.bbox
    while True:
        px = x0 + (x1 - x0) * rng.random()
        py = y0 + (y1 - y0) * rng.random()
        if subset.contains((px, py)):
            return State(px, py)


def subset_gain(grid, subset: SamplingSubset) -> float:
    """Ratio of domain area to subset area."""
    area = subset.area
    if area <= 0:
        raise ValueError("empty subset")
    bounds = _bounds_of(grid)
    domain_area = (bounds[2] - bounds[0]) * (bounds[3] - bounds[1])
    return domain_area / area


def intermediate_states(x_near, x_rand, delta: float) -> np.ndarray:
    """Points k*delta apart from x_near toward x_rand, ending exactly at x_rand."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    ax, ay = float(x_near[0]), float(x_near[1])
    bx, by = float(x_rand[0]), float(x_rand[1])
    length = math.hypot(bx - ax, by - ay)
    if length == 0.0:
        raise ValueError("coincident endpoints")
    ux, uy = (bx - ax) / length, (by - ay) / length
    n = math.floor(length / delta)
    k = np.arange(1, n + 1, dtype=float)
    pts = np.column_stack((ax + k * delta * ux, ay + k * delta * uy))
    if n and math.hypot(pts[-1, 0] - bx, pts[-1, 1] - by) <= 1e-9 * max(1.0, length):
        pts[-1] = (bx, by)
    else:
        pts = np.vstack((pts, [[bx, by]]))
    return pts


def detect_intersection(grid: OccupancyGrid, x_near, x_rand, v_j, params, blocked=None):
    """Walk the intermediate states and look for ``n_cons`` consecutive free rays.

    Returns ``(state, True)`` at the point where the run of free rays along ``v_j``
    (range ``params.d``) first reaches ``params.n_cons``; otherwise ``(x_rand, False)``.
    ``blocked`` optionally vetoes points (treated like an obstructed ray).
    """
    run = 0
    for px, py in intermediate_states(x_near, x_rand, params.delta):
        p = (float(px), float(py))
        if (blocked is None or not blocked(p)) and ray_cast_free(grid, p, v_j, params.d):
            run += 1
            if run >= params.n_cons:
                return State(*p), True
        else:
            run = 0
    return State(float(x_rand[0]), float(x_rand[1])), False
