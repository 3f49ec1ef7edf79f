from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lasmp.gridmap import (
    MapFormatError,
    OccupancyGrid,
    Pose,
    grid_from_rects,
    inflate,
    is_free,
    load_map,
    normalize_angle,
    ray_cast_free,
    sample_points,
    segment_valid,
)

import oracles
from instances import random_grid, random_point


# load_map


def test_load_single_occupied_cell():
    g = load_map("3 2 1.0 0.0 0.0\n010\n000\n")
    assert (g.width, g.height, g.resolution) == (3, 2, 1.0)
    assert g.occupied_count() == 1
    assert g.cells[0, 1]


def test_extents_of_empty_grid():
    g = load_map("10 10 0.1 0 0\n" + "\n".join(["0" * 10] * 10))
    assert g.extents == pytest.approx((1.0, 1.0))
    assert g.occupied_count() == 0


def test_row_zero_is_minimum_y():
    g = load_map("2 2 1 0 0\n10\n00\n")
    assert not is_free(g, (0.5, 0.5))
    assert is_free(g, (0.5, 1.5))


@pytest.mark.parametrize("text, message", [
    ("3 2 1.0 0.0 0.0\n01\n000\n", "row length mismatch"),
    ("3 2 1.0 0.0\n010\n000\n", "malformed header"),
    ("3 2 abc 0 0\n010\n000\n", "malformed header"),
    ("3 2 1.0 0 0\n0x0\n000\n", "illegal cell character"),
    ("", "malformed header"),
])
def test_load_errors(text, message):
    with pytest.raises(MapFormatError, match=message):
        load_map(text)


def test_map_text_round_trip():
    rng = np.random.default_rng(4)
    g = random_grid(rng)
    h = load_map(g.to_text())
    assert np.array_equal(g.cells, h.cells)
    assert (h.width, h.height, h.resolution, h.origin) == (g.width, g.height, g.resolution, g.origin)


def test_grid_is_read_only():
    g = random_grid(np.random.default_rng(0))
    with pytest.raises(ValueError):
        g.cells[0, 0] = True


def test_pose_yaw_normalized():
    assert Pose.of(0, 0, 3 * math.pi).yaw == pytest.approx(math.pi)
    assert Pose.of(0, 0, -math.pi).yaw == pytest.approx(math.pi)
    assert normalize_angle(-math.pi / 2) == pytest.approx(-math.pi / 2)


@given(st.floats(-50, 50))
def test_normalize_angle_range(a):
    w = normalize_angle(a)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)


# inflate


def test_inflate_zero_is_identity():
    g = random_grid(np.random.default_rng(1))
    assert np.array_equal(inflate(g, 0.0).cells, g.cells)


def test_inflate_four_neighbours_not_diagonals():
    cells = np.zeros((5, 5), dtype=bool)
    cells[2, 2] = True
    g = inflate(OccupancyGrid(5, 5, 1.0, cells=cells), 1.0)
    expected = {(2, 2), (1, 2), (3, 2), (2, 1), (2, 3)}
    assert {tuple(map(int, rc)) for rc in np.argwhere(g.cells)} == expected
    assert g.inflation_radius == 1.0


def test_inflate_negative_radius():
    with pytest.raises(ValueError):
        inflate(OccupancyGrid(2, 2, 1.0), -0.1)


def test_inflate_matches_all_pairs_oracle():
    rng = np.random.default_rng(2)
    for _ in range(20):
        g = random_grid(rng, density=0.05)
        r = 2 * g.resolution
        assert inflate(g, r).cells.tolist() == oracles.inflate_cells(g, r)


def test_inflate_monotone_and_superset():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = random_grid(rng, density=0.08)
        r1, r2 = sorted(rng.uniform(0, 3 * g.resolution, 2))
        a, b = inflate(g, r1).cells, inflate(g, r2).cells
        assert not (g.cells & ~a).any()
        assert not (a & ~b).any()


# is_free


def test_is_free_basic():
    g = OccupancyGrid(10, 10, 0.1)
    assert is_free(g, (0.55, 0.55))
    for p in [(-0.01, 0.5), (0.5, 1.0), (1.2, 0.5), (0.5, -1e-9), (math.nan, 0.5)]:
        assert not is_free(g, p)


def test_point_inside_inflated_cell():
    cells = np.zeros((10, 10), dtype=bool)
    cells[5, 5] = True
    g = inflate(OccupancyGrid(10, 10, 0.1, cells=cells), 0.1)
    assert not is_free(g, (0.45, 0.55))  # west neighbour of the wall cell
    assert is_free(g, (0.45, 0.45))  # diagonal stays free


def test_shared_edge_goes_to_higher_cell():
    cells = np.zeros((1, 2), dtype=bool)
    cells[0, 1] = True
    g = OccupancyGrid(2, 1, 1.0, cells=cells)
    assert not is_free(g, (1.0, 0.5))


# segments and rays


def test_zero_length_segment():
    g = OccupancyGrid(10, 10, 0.1)
    assert segment_valid(g, (0.5, 0.5), (0.5, 0.5))


def test_segment_crossing_wall_in_corridor():
    g = grid_from_rects(10, 10, 1.0, [(0, 4, 10, 6)])  # corridor along y in (4, 6)
    assert segment_valid(g, (0.5, 5.0), (9.5, 5.0))
    assert not segment_valid(g, (0.5, 5.0), (9.5, 6.5))
    assert not segment_valid(g, (5.0, 3.5), (5.0, 5.0))


def test_sample_spacing_bound():
    pts = sample_points((0, 0), (1.0, 0.7), 0.05)
    gaps = np.hypot(*np.diff(pts, axis=0).T)
    assert gaps.max() <= 0.05 + 1e-12
    assert tuple(pts[0]) == (0, 0) and tuple(pts[-1]) == (1.0, 0.7)


def test_ray_examples():
    g = OccupancyGrid(10, 10, 1.0)
    assert ray_cast_free(g, (5, 5), (1, 0), 2)
    cells = np.zeros((10, 10), dtype=bool)
    cells[:, 6] = True
    wall = OccupancyGrid(10, 10, 1.0, cells=cells)
    assert not ray_cast_free(wall, (5, 5), (1, 0), 2)
    assert ray_cast_free(wall, (5, 5), (-1, 0), 2)


def test_ray_leaving_map_is_blocked():
    g = OccupancyGrid(10, 10, 1.0)
    assert not ray_cast_free(g, (9, 5), (1, 0), 2)


@pytest.mark.parametrize("direction, d", [((1, 1), 1.0), ((0.5, 0), 1.0), ((1, 0), 0.0), ((1, 0), -1.0)])
def test_ray_argument_errors(direction, d):
    with pytest.raises(ValueError):
        ray_cast_free(OccupancyGrid(4, 4, 1.0), (1, 1), direction, d)


def test_segments_agree_with_oracle():
    rng = np.random.default_rng(10)
    for _ in range(1000):
        g = random_grid(rng, size=int(rng.integers(5, 21)))
        a, b = random_point(rng, g), random_point(rng, g)
        assert segment_valid(g, a, b) == oracles.segment_free(g, a, b), (a, b)


def test_rays_agree_with_oracle():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        g = random_grid(rng, size=int(rng.integers(5, 21)), density=0.1)
        o = random_point(rng, g, margin=0)
        th = rng.uniform(-math.pi, math.pi)
        v = (math.cos(th), math.sin(th))
        d = float(rng.uniform(0.05, 0.5)) * g.extents[0]
        assert ray_cast_free(g, o, v, d) == oracles.ray_free(g, o, v, d)


coords = st.floats(-0.5, 5.5, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(coords, coords, coords, coords, st.integers(0, 2**32 - 1))
def test_segment_properties(ax, ay, bx, by, seed):
    g = random_grid(np.random.default_rng(seed), size=10, res=0.5)
    a, b = (ax, ay), (bx, by)
    assert segment_valid(g, a, b) == segment_valid(g, b, a)
    if segment_valid(g, a, b):
        assert is_free(g, a) and is_free(g, b)


@settings(max_examples=200, deadline=None)
@given(coords, coords, st.floats(-math.pi, math.pi), st.floats(0.01, 3), st.floats(0.01, 3),
       st.integers(0, 2**32 - 1))
def test_ray_monotone_in_range(x, y, th, d1, d2, seed):
    g = random_grid(np.random.default_rng(seed), size=10, res=0.5, density=0.1)
    lo, hi = sorted((d1, d2))
    v = (math.cos(th), math.sin(th))
    if ray_cast_free(g, (x, y), v, hi):
        assert ray_cast_free(g, (x, y), v, lo)


def test_grid_from_rects_carves_centres():
    g = grid_from_rects(4, 4, 1.0, [(1, 1, 3, 3)])
    assert g.occupied_count() == 12
    assert is_free(g, (1.5, 2.5))
