from __future__ import annotations

import xml.etree.ElementTree as ET

from lasmp.gridmap import OccupancyGrid, Pose, grid_from_rects
from lasmp.planner import Path, SearchTree
from lasmp.render import render

def parse(svg):
    return ET.fromstring(svg)


def by_class(root, cls):
    return [e for e in root.iter() if e.get("class") == cls]


def test_empty_tree_draws_map_and_markers():
    g = grid_from_rects(10, 10, 1.0, [(0, 0, 10, 5)])
    root = parse(render(g, None, None, Pose.of(1, 1, 0), Pose.of(8, 1, 0)))
    assert len(by_class(root, "obstacle")) == 5  # one run per occupied row
    assert by_class(root, "vertex") == [] and by_class(root, "edge") == []
    assert len(by_class(root, "start")) == 1 and len(by_class(root, "goal")) == 1


def test_three_node_tree():
    t = SearchTree((1, 1))
    a = t.add((2, 1), 0)
    t.add((2, 2), a)
    root = parse(render(OccupancyGrid(4, 4, 1.0), t, Path([(1, 1), (2, 1), (2, 2)])))
    assert len(by_class(root, "vertex")) == 3
    assert len(by_class(root, "edge")) == 2
    assert len(by_class(root, "path")) == 1


def test_y_axis_points_up():
    root = parse(render(OccupancyGrid(4, 4, 1.0), start=Pose.of(0, 0, 0), goal=Pose.of(0, 4, 0)))
    assert float(by_class(root, "start")[0].get("cy")) == 160.0
    assert float(by_class(root, "goal")[0].get("cy")) == 0.0


def test_output_is_byte_identical():
    g = grid_from_rects(20, 20, 0.5, [(2, 2, 8, 8)])
    t = SearchTree((0.5, 0.5))
    for k in range(1, 10):
        t.add((0.5 + 0.3 * k, 0.5 + 0.1 * k * k % 3), k - 1)
    assert render(g, t) == render(g, t)
