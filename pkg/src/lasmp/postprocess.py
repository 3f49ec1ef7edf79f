"""Path smoothing and a pure-pursuit follower for differential-drive robots."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .gridmap import OccupancyGrid, Pose, State, normalize_angle, segment_valid


@dataclass(frozen=True)
class RobotKinematics:
    name: str
    track_width: float  # m
    wheel_radius: float  # m
    max_wheel_speed: float = 6.0  # rad/s

    def __post_init__(self):
        if min(self.track_width, self.wheel_radius, self.max_wheel_speed) <= 0:
            raise ValueError("kinematic parameters must be positive")

    @property
    def max_speed(self) -> float:
        return self.max_wheel_speed * self.wheel_radius

    def wheel_speeds(self, v: float, omega: float) -> tuple[float, float]:
        """(left, right) wheel angular speeds for a body twist."""
        half = 0.5 * self.track_width * omega
        return (v - half) / self.wheel_radius, (v + half) / self.wheel_radius


ROBOTS = {
    "pioneer3dx": RobotKinematics("pioneer3dx", 0.380, 0.097),
    "turtlebot3": RobotKinematics("turtlebot3", 0.160, 0.033),
    "turtlebot2": RobotKinematics("turtlebot2", 0.230, 0.041),
}


def _dedupe(states) -> np.ndarray:
    pts = np.asarray([(float(s[0]), float(s[1])) for s in states], dtype=float)
    if len(pts) == 0:
        return pts.reshape(0, 2)
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.diff(pts, axis=0) != 0.0, axis=1)
    return pts[keep]


def smooth_path(path, samples_per_segment: int = 10, grid: OccupancyGrid | None = None) -> list[State]:
    """Natural cubic spline through the waypoints (chord-length parameter), resampled.

    Each waypoint span yields ``samples_per_segment`` points; the end states are
    copied exactly. With ``grid`` given, any span whose samples are not connected
    by collision-free segments falls back to the straight waypoint segment.
    """
    states = getattr(path, "states", path)
    if len(states) < 2:
        raise ValueError("smoothing needs at least 2 states")
    if samples_per_segment < 1:
        raise ValueError("samples_per_segment must be at least 1")
    pts = _dedupe(states)
    if len(pts) < 2:
        raise ValueError("smoothing needs at least 2 distinct states")

    t = np.concatenate(([0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T))))
    spline = CubicSpline(t, pts, bc_type="natural", axis=0)
    frac = np.arange(samples_per_segment) / samples_per_segment

    out = []
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        span = spline(t[i] + frac * (t[i + 1] - t[i]))
        span[0] = a
        if grid is not None:
            chain = np.vstack((span, b))
            if not all(segment_valid(grid, p, q) for p, q in zip(chain, chain[1:])):
                span = a + frac[:, None] * (b - a)
        out.extend(State(float(x), float(y)) for x, y in span)
    out.append(State(float(pts[-1, 0]), float(pts[-1, 1])))
    return out


def shortcut_path(path, grid: OccupancyGrid) -> list[State]:
    """Greedy line-of-sight pruning: from each kept state jump to the furthest visible one."""
    states = [State(float(p[0]), float(p[1])) for p in getattr(path, "states", path)]
    if len(states) < 2:
        return states
    out = [states[0]]
    i = 0
    while i < len(states) - 1:
        j = len(states) - 1
        while j > i + 1 and not segment_valid(grid, states[i], states[j]):
            j -= 1
        out.append(states[j])
        i = j
    return out


def round_corners(states, grid: OccupancyGrid, radius: float = 0.7) -> list[State]:
    """Replace each corner by three waypoints on a tangent arc.

    The arc uses at most half of each adjoining segment; its radius shrinks (x0.7)
    until the chords through the arc midpoint are collision-free, and the corner is
    kept as is when nothing above 5 cm fits. A spline through the result turns with
    roughly the arc radius instead of kinking at the corner.
    """
    pts = _dedupe(states)
    if len(pts) < 3:
        return [State(float(x), float(y)) for x, y in pts]
    out = [pts[0]]
    for a, v, b in zip(pts, pts[1:], pts[2:]):
        u_in, u_out = v - a, b - v
        l_in, l_out = math.hypot(*u_in), math.hypot(*u_out)
        u_in, u_out = u_in / l_in, u_out / l_out
        turn = math.acos(min(1.0, max(-1.0, float(u_in @ u_out))))
        if turn < 1e-3:
            continue  # collinear, the waypoint adds nothing
        if math.pi - turn < 1e-6:
            out.append(v)  # reversal: no tangent arc
            continue
        bisector = (u_out - u_in) / math.hypot(*(u_out - u_in))
        r = radius
        placed = False
        while r > 0.05:
            t = min(r * math.tan(turn / 2), 0.5 * l_in, 0.5 * l_out)
            rr = t / math.tan(turn / 2)
            p1, p2 = v - t * u_in, v + t * u_out
            mid = v + bisector * rr * (1.0 / math.cos(turn / 2) - 1.0)
            if segment_valid(grid, p1, mid) and segment_valid(grid, mid, p2):
                out += [p1, mid, p2]
                placed = True
                break
            r *= 0.7
        if not placed:
            out.append(v)
    out.append(pts[-1])
    return [State(float(x), float(y)) for x, y in _dedupe(out)]


def smooth_for_tracking(path, grid: OccupancyGrid, samples_per_segment: int = 10,
                        radius: float = 0.7) -> list[State]:
    """Shortcut, round the corners, then spline: the reference handed to the follower."""
    return smooth_path(round_corners(shortcut_path(path, grid), grid, radius), samples_per_segment, grid)


@dataclass
class Trajectory:
    times: np.ndarray
    poses: list[Pose]
    cross_track_errors: np.ndarray
    wheel_speeds: np.ndarray  # (n, 2) commanded (left, right); last row repeats
    reached: bool = False
    timeout: bool = False

    @property
    def max_cross_track_error(self) -> float:
        return float(np.max(self.cross_track_errors)) if len(self.cross_track_errors) else 0.0

    def to_text(self) -> str:
        lines = [
            f"{t:.4f} {p.position.x:.6f} {p.position.y:.6f} {p.yaw:.6f} {e:.6f}"
            for t, p, e in zip(self.times, self.poses, self.cross_track_errors)
        ]
        return "\n".join(lines) + "\n"


@dataclass
class _Track:
    pts: np.ndarray
    s: np.ndarray = field(init=False)

    def __post_init__(self):
        seg = np.hypot(*np.diff(self.pts, axis=0).T)
        self.s = np.concatenate(([0.0], np.cumsum(seg)))

    def project(self, p, lo: int, hi: int) -> tuple[int, float, float]:
        """Closest point on segments lo..hi-1: (segment, arc position, distance)."""
        a = self.pts[lo:hi]
        b = self.pts[lo + 1: hi + 1]
        d = b - a
        L2 = np.einsum("ij,ij->i", d, d)
        u = np.clip(np.einsum("ij,ij->i", np.asarray(p) - a, d) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
        q = a + u[:, None] * d
        dist = np.hypot(q[:, 0] - p[0], q[:, 1] - p[1])
        k = int(np.argmin(dist))
        i = lo + k
        return i, float(self.s[i] + u[k] * math.sqrt(L2[k])), float(dist[k])


def simulate_follow(smooth, start: Pose, kin: RobotKinematics, lookahead: float = 0.5, dt: float = 0.02,
                    goal_tol: float = 0.1, speed: float | None = None, max_time: float | None = None,
                    search_window: float | None = None) -> Trajectory:
    """Pure pursuit on a unicycle integrated with explicit Euler steps.

    The closest path point only moves forward (searched within ``search_window`` of
    arc length ahead of the previous one, default 2 * lookahead); the target is the
    first path sample at least ``lookahead`` further along. Curvature is
    2 sin(alpha) / lookahead; when a wheel would exceed its limit, linear and angular
    speed are scaled together so the commanded curvature is kept.
    """
    if not lookahead > 0 or not dt > 0:
        raise ValueError("lookahead and dt must be positive")
    pts = _dedupe(smooth)
    if len(pts) < 2:
        raise ValueError("need at least 2 distinct path points")
    track = _Track(pts)
    total = track.s[-1]
    v_ref = 0.8 * kin.max_speed if speed is None else speed
    if not v_ref > 0:
        raise ValueError("speed must be positive")
    if max_time is None:
        max_time = 3.0 * total / v_ref + 10.0
    window = 2.0 * lookahead if search_window is None else search_window
    goal = pts[-1]
    nseg = len(pts) - 1

    x, y, yaw = start.position.x, start.position.y, start.yaw
    seg, s_c, e = track.project((x, y), 0, nseg)
    times, poses, errs, wheels = [0.0], [start], [e], []
    reached = math.hypot(goal[0] - x, goal[1] - y) <= goal_tol
    step = 0
    while not reached and step * dt < max_time:
        s_target = s_c + lookahead
        j = int(np.searchsorted(track.s, s_target, side="left"))
        tx, ty = pts[min(j, nseg)]
        alpha = normalize_angle(math.atan2(ty - y, tx - x) - yaw)
        kappa = 2.0 * math.sin(alpha) / lookahead
        v, omega = v_ref, v_ref * kappa
        wl, wr = kin.wheel_speeds(v, omega)
        peak = max(abs(wl), abs(wr))
        if peak > kin.max_wheel_speed:
            f = kin.max_wheel_speed / peak
            v, omega, wl, wr = v * f, omega * f, wl * f, wr * f
        wheels.append((wl, wr))

        x += v * math.cos(yaw) * dt
        y += v * math.sin(yaw) * dt
        yaw = normalize_angle(yaw + omega * dt)
        step += 1

        hi = int(np.searchsorted(track.s, s_c + window, side="right"))
        seg, s_c, e = track.project((x, y), seg, max(seg + 1, min(hi, nseg)))
        times.append(step * dt)
        poses.append(Pose.of(x, y, yaw))
        errs.append(e)
        reached = math.hypot(goal[0] - x, goal[1] - y) <= goal_tol

    wheels.append(wheels[-1] if wheels else (0.0, 0.0))
    return Trajectory(np.asarray(times), poses, np.asarray(errs), np.asarray(wheels),
                      reached=reached, timeout=not reached)
