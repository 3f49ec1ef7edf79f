from __future__ import annotations

import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lasmp.gridmap import OccupancyGrid, grid_from_rects
from lasmp.grounding import NavCommand
from lasmp.planner import (
    PlannerMetrics,
    detect_intersection,
    get_subset,
    heading_after,
    intermediate_states,
    sample_subset,
    subset_gain,
    turn_to_direction,
)
from lasmp.planner.geometry import clip_to_box

import oracles
from instances import corridor_query


def box(w=2.0, h=4.0):
    return SimpleNamespace(w=w, h=h)


def params(**kw):
    base = dict(d=2.0, delta=1.0, n_cons=3)
    base.update(kw)
    return SimpleNamespace(**base)


@pytest.mark.parametrize("heading, cmd, expected", [
    (0.0, NavCommand.LEFT, (0, 1)),
    (math.pi / 2, NavCommand.RIGHT, (1, 0)),
    (0.0, NavCommand.BACKWARD, (-1, 0)),
    (0.3, NavCommand.STRAIGHT, (math.cos(0.3), math.sin(0.3))),
    (0.0, NavCommand.NR, (0, -1)),
    (0.0, NavCommand.NL, (0, 1)),
])
def test_turn_to_direction(heading, cmd, expected):
    assert turn_to_direction(heading, cmd) == pytest.approx(expected, abs=1e-15)


def test_heading_after_prohibitions_keep_heading():
    assert heading_after(1.0, NavCommand.NR) == 1.0
    assert heading_after(1.0, NavCommand.NL) == 1.0
    assert heading_after(1.0, NavCommand.LEFT) == pytest.approx(1.0 + math.pi / 2)
    assert heading_after(1.0, NavCommand.BACKWARD) == pytest.approx(1.0 + math.pi)


# subsets


def test_subset_heading_up_matches_corner_formula():
    s = get_subset((0, 0), box(), math.pi / 2)
    assert s.vertices == ((1, 2), (1, -2), (-1, -2), (-1, 2))
    assert s.area == pytest.approx(8.0)


def test_subset_heading_up_random_exact():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        x = tuple(rng.uniform(-50, 50, 2))
        w = float(rng.uniform(0.1, 5))
        h = w + float(rng.uniform(0.1, 5))
        got = get_subset(x, box(w, h), math.pi / 2).vertices
        want = oracles.corner_vertices(x, w, h)
        assert np.max(np.abs(np.array(got) - np.array(want))) <= 1e-12


def test_subset_clipped_at_corner():
    s = get_subset((0.5, 0.5), box(), math.pi / 2, (0, 0, 10, 10))
    xs, ys = zip(*s.clipped_polygon)
    assert (min(xs), max(xs), min(ys), max(ys)) == pytest.approx((0, 1.5, 0, 2.5))
    assert s.area == pytest.approx(1.5 * 2.5)


def test_subset_rotation_oracle():
    rng = np.random.default_rng(1)
    for _ in range(200):
        x = rng.uniform(-5, 5, 2)
        heading = float(rng.uniform(-math.pi, math.pi))
        up = np.array(oracles.corner_vertices(x, 2, 4)) - x
        th = heading - math.pi / 2
        rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        want = up @ rot.T + x
        got = np.array(get_subset(x, box(), heading).vertices)
        assert np.allclose(got, want, atol=1e-12)


def test_subset_heading_zero_long_axis_along_x():
    s = get_subset((5, 5), box(), 0.0)
    xs, ys = zip(*s.vertices)
    assert max(xs) - min(xs) == pytest.approx(4)
    assert max(ys) - min(ys) == pytest.approx(2)
    assert (7, 4) in [tuple(np.round(v, 12)) for v in s.vertices]


def test_subset_anchor_outside_domain():
    with pytest.raises(ValueError):
        get_subset((11, 5), box(), 0.0, (0, 0, 10, 10))


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 10), st.floats(0, 10), st.floats(-math.pi, math.pi))
def test_clipped_polygon_properties(x, y, heading):
    s = get_subset((x, y), box(), heading, (0, 0, 10, 10))
    assert len(s.clipped_polygon) >= 3
    assert len(s.clipped_polygon) <= 8
    for px, py in s.clipped_polygon:
        assert -1e-9 <= px <= 10 + 1e-9 and -1e-9 <= py <= 10 + 1e-9
    assert s.area <= 8 + 1e-9
    assert s.area == pytest.approx(oracles.shoelace(s.clipped_polygon))


def test_clip_to_box_against_rasterized_area():
    rng = np.random.default_rng(2)
    for _ in range(20):
        s = get_subset(tuple(rng.uniform(0, 4, 2)), box(), float(rng.uniform(-3, 3)))
        poly = clip_to_box(list(s.vertices), (0, 0, 4, 4))
        gx, gy = np.meshgrid(np.linspace(0.005, 3.995, 400), np.linspace(0.005, 3.995, 400))
        inside = np.zeros_like(gx, dtype=bool)
        c, sn = math.cos(s.heading), math.sin(s.heading)
        dx, dy = gx - s.center.x, gy - s.center.y
        inside = (np.abs(dx * c + dy * sn) <= 2) & (np.abs(-dx * sn + dy * c) <= 1)
        assert oracles.shoelace(poly) == pytest.approx(inside.mean() * 16, abs=0.05)


def test_sample_subset_uniform_and_inside():
    s = get_subset((0.5, 0.5), box(1.0, 1.0 + 1e-12), math.pi / 2)
    rng = np.random.default_rng(3)
    m = PlannerMetrics()
    pts = np.array([sample_subset(s, rng, m) for _ in range(100_000)])
    assert m.sample_queries == 100_000
    assert np.all([s.contains(p) for p in pts[:5000]])
    assert np.all((pts >= -1e-12) & (pts <= 1 + 1e-12))
    # 4 sigma of the mean of a uniform on [0, 1]
    assert np.abs(pts.mean(axis=0) - 0.5).max() < 4 * math.sqrt(1 / 12 / len(pts)) + 1e-3


def test_sample_rotated_clipped_subset_inside():
    s = get_subset((0.3, 9.8), box(), 0.7, (0, 0, 10, 10))
    rng = np.random.default_rng(4)
    for _ in range(10_000):
        assert s.contains(sample_subset(s, rng))


def test_subset_gain():
    grid = OccupancyGrid(100, 100, 0.1)
    s = get_subset((5, 5), box(), math.pi / 2, grid)
    assert subset_gain(grid, s) == 12.5
    whole = get_subset((5, 5), box(10, 10 + 1e-9), math.pi / 2, grid)
    assert subset_gain(grid, whole) == pytest.approx(1.0)
    clipped = get_subset((0.2, 0.2), box(), 1.0, grid)
    assert subset_gain(grid, clipped) >= 12.5


# intermediate states


def test_intermediate_states_example():
    pts = intermediate_states((0, 0), (3, 4), 1.0)
    want = [[0.6, 0.8], [1.2, 1.6], [1.8, 2.4], [2.4, 3.2], [3.0, 4.0]]
    assert np.allclose(pts, want, atol=1e-12, rtol=0)
    assert tuple(pts[-1]) == (3.0, 4.0)


def test_intermediate_states_short_segment():
    assert intermediate_states((0, 0), (0.3, 0.4), 1.0).tolist() == [[0.3, 0.4]]


def test_intermediate_states_errors():
    with pytest.raises(ValueError):
        intermediate_states((1, 1), (1, 1), 0.1)
    with pytest.raises(ValueError):
        intermediate_states((0, 0), (1, 1), 0.0)


def test_intermediate_states_match_construction():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        a, b = rng.uniform(-10, 10, 2), rng.uniform(-10, 10, 2)
        delta = float(rng.uniform(0.05, 2))
        pts = intermediate_states(a, b, delta)
        want = oracles.intermediate_points(tuple(a), tuple(b), delta)
        assert np.allclose(pts, want, atol=1e-9, rtol=0)
        assert tuple(pts[-1]) == tuple(b)
        u = (b - a) / np.linalg.norm(b - a)
        body = pts[:-1] if np.linalg.norm(pts[-1] - a) % delta > 1e-9 else pts
        for k, p in enumerate(body, start=1):
            assert np.linalg.norm(p - a) == pytest.approx(k * delta, abs=1e-9)
            assert abs(u[0] * (p - a)[1] - u[1] * (p - a)[0]) <= 1e-9


# intersection detection


def open_grid():
    return OccupancyGrid(40, 40, 0.5, (-10, -10))


def test_detect_on_empty_map():
    p, hit = detect_intersection(open_grid(), (0, 0), (0, 5), (1, 0), params())
    assert hit and p == pytest.approx((0, 3))


def test_detect_wall_along_segment():
    cells = np.zeros((40, 40), dtype=bool)
    cells[:, 22] = True  # x in [1, 1.5)
    g = OccupancyGrid(40, 40, 0.5, (-10, -10), cells)
    p, hit = detect_intersection(g, (0, 0), (0, 5), (1, 0), params())
    assert not hit and tuple(p) == (0, 5)


def test_detect_gap_resets_counter():
    # wall beside the segment with an opening for y in [2, 5)
    g = grid_from_rects(20, 20, 0.5, [(-10, -10, 0.6, 10), (0.5, 2.0, 10, 5.0)], origin=(-5, -5))
    g = OccupancyGrid(g.width, g.height, g.resolution, g.origin, g.cells)
    p, hit = detect_intersection(g, (0, 0), (0, 7), (1, 0), params(d=2.0))
    want = oracles.detect(g, (0, 0), (0, 7), (1, 0), 2.0, 1.0, 3)
    assert (tuple(p), hit) == (pytest.approx(want[0]), want[1])
    assert hit and p == pytest.approx((0, 4))


def test_detect_matches_enumeration_oracle():
    rng = np.random.default_rng(6)
    for _ in range(500):
        g, a, b, v, d, delta, n_cons = corridor_query(rng)
        prm = params(d=d, delta=delta, n_cons=n_cons)
        got = detect_intersection(g, a, b, v, prm)
        want = oracles.detect(g, a, b, v, prm.d, prm.delta, prm.n_cons)
        assert got[1] == want[1]
        assert tuple(got[0]) == pytest.approx(want[0], abs=1e-9)


def test_detect_blocked_predicate_vetoes_points():
    p, hit = detect_intersection(open_grid(), (0, 0), (0, 5), (1, 0), params(), blocked=lambda q: q[1] < 2.5)
    assert hit and p == pytest.approx((0, 5))
