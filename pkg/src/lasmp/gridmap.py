"""2D occupancy grids: map I/O, obstacle inflation, point/segment/ray collision checks.

Conventions:
- ``cells[row, col]`` is True for occupied cells; row 0 is the minimum-y row.
- World point ``p`` lies in cell ``floor((p - origin) / resolution)``; a point on a
  shared edge belongs to the higher-index cell.
- Anything outside the grid extents counts as occupied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy import ndimage

# Segments and rays are point-sampled at resolution * CHECK_FRACTION.
CHECK_FRACTION = 0.1


class MapFormatError(ValueError):
    pass


class State(NamedTuple):
    x: float
    y: float


def normalize_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.fmod(a + math.pi, 2.0 * math.pi)
    if w <= 0.0:
        w += 2.0 * math.pi
    return w - math.pi


@dataclass(frozen=True)
class Pose:
    position: State
    yaw: float

    def __post_init__(self):
        object.__setattr__(self, "position", State(float(self.position[0]), float(self.position[1])))
        object.__setattr__(self, "yaw", normalize_angle(float(self.yaw)))

    @classmethod
    def of(cls, x: float, y: float, yaw: float) -> "Pose":
        return cls(State(x, y), yaw)


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    width: int
    height: int
    resolution: float
    origin: tuple[float, float] = (0.0, 0.0)
    cells: np.ndarray = field(default=None, repr=False)
    inflation_radius: float = 0.0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must have at least one cell")
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")
        cells = self.cells
        if cells is None:
            cells = np.zeros((self.height, self.width), dtype=bool)
        cells = np.asarray(cells, dtype=bool).reshape(self.height, self.width).copy()
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @property
    def x_min(self) -> float:
        return self.origin[0]

    @property
    def y_min(self) -> float:
        return self.origin[1]

    @property
    def x_max(self) -> float:
        return self.origin[0] + self.width * self.resolution

    @property
    def y_max(self) -> float:
        return self.origin[1] + self.height * self.resolution

    @property
    def extents(self) -> tuple[float, float]:
        return (self.width * self.resolution, self.height * self.resolution)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)

    @property
    def area(self) -> float:
        w, h = self.extents
        return w * h

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        """(col, row) of the cell containing a world point; may be out of range."""
        return (
            math.floor((x - self.origin[0]) / self.resolution),
            math.floor((y - self.origin[1]) / self.resolution),
        )

    def cell_center(self, col: int, row: int) -> State:
        return State(
            self.origin[0] + (col + 0.5) * self.resolution,
            self.origin[1] + (row + 0.5) * self.resolution,
        )

    def occupied_count(self) -> int:
        return int(self.cells.sum())

    def to_text(self) -> str:
        lines = [f"{self.width} {self.height} {self.resolution!r} {self.origin[0]!r} {self.origin[1]!r}"]
        for row in self.cells:
            lines.append("".join("1" if c else "0" for c in row))
        return "\n".join(lines) + "\n"


def load_map(text: str) -> OccupancyGrid:
    """Parse the plain-text map format (header line, then ``height`` rows of 0/1)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MapFormatError("malformed header: empty document")
    parts = lines[0].split()
    if len(parts) != 5:
        raise MapFormatError("malformed header: expected 'width height resolution origin_x origin_y'")
    try:
        width, height = int(parts[0]), int(parts[1])
        resolution, ox, oy = (float(p) for p in parts[2:])
    except ValueError as exc:
        raise MapFormatError(f"malformed header: {exc}") from None
    if width < 1 or height < 1 or not resolution > 0:
        raise MapFormatError("malformed header: non-positive size or resolution")
    rows = lines[1:]
    if len(rows) != height:
        raise MapFormatError(f"expected {height} rows, found {len(rows)}")
    cells = np.zeros((height, width), dtype=bool)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise MapFormatError(f"row length mismatch at row {r}: {len(row)} != {width}")
        bad = set(row) - {"0", "1"}
        if bad:
            raise MapFormatError(f"illegal cell character {sorted(bad)[0]!r} at row {r}")
        cells[r] = np.frombuffer(row.encode("ascii"), dtype=np.uint8) == ord("1")
    return OccupancyGrid(width, height, resolution, (ox, oy), cells)


def read_map(path: str | Path) -> OccupancyGrid:
    return load_map(Path(path).read_text(encoding="utf-8"))


def inflate(grid: OccupancyGrid, radius: float) -> OccupancyGrid:
    """Dilate obstacles: a cell becomes occupied if its center is within ``radius``
    of any occupied cell center. Inflation is applied to ``grid.cells`` as given."""
    if radius < 0:
        raise ValueError("inflation radius must be non-negative")
    if radius == 0 or not grid.cells.any():
        cells = grid.cells
    else:
        # distance from each free cell center to the nearest occupied cell center
        dist = ndimage.distance_transform_edt(~grid.cells, sampling=grid.resolution)
        cells = dist <= radius + 1e-9 * grid.resolution
    return OccupancyGrid(
        grid.width, grid.height, grid.resolution, grid.origin, cells,
        inflation_radius=grid.inflation_radius + radius,
    )


def is_free(grid: OccupancyGrid, s) -> bool:
    x, y = float(s[0]), float(s[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        return False
    col, row = grid.cell_of(x, y)
    if col < 0 or row < 0 or col >= grid.width or row >= grid.height:
        return False
    return not grid.cells[row, col]


def _points_free(grid: OccupancyGrid, pts: np.ndarray) -> bool:
    cols = np.floor((pts[:, 0] - grid.origin[0]) / grid.resolution)
    rows = np.floor((pts[:, 1] - grid.origin[1]) / grid.resolution)
    inside = (cols >= 0) & (rows >= 0) & (cols < grid.width) & (rows < grid.height)
    if not inside.all():
        return False
    return not grid.cells[rows.astype(np.intp), cols.astype(np.intp)].any()


def sample_points(a, b, spacing: float) -> np.ndarray:
    """Evenly spaced points from a to b (both included), gaps no larger than ``spacing``."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    length = math.hypot(bx - ax, by - ay)
    n = max(1, math.ceil(length / spacing))
    t = np.linspace(0.0, 1.0, n + 1)
    return np.column_stack((ax + t * (bx - ax), ay + t * (by - ay)))


def segment_valid(grid: OccupancyGrid, a, b) -> bool:
    return _points_free(grid, sample_points(a, b, grid.resolution * CHECK_FRACTION))


def ray_cast_free(grid: OccupancyGrid, origin, direction, d: float) -> bool:
    """True when nothing blocks ``origin + t * direction`` for t in [0, d]."""
    dx, dy = float(direction[0]), float(direction[1])
    if abs(math.hypot(dx, dy) - 1.0) > 1e-9:
        raise ValueError("ray direction must be a unit vector")
    if not d > 0:
        raise ValueError("ray range must be positive")
    end = (origin[0] + d * dx, origin[1] + d * dy)
    return _points_free(grid, sample_points(origin, end, grid.resolution * CHECK_FRACTION))


def grid_from_rects(width: int, height: int, resolution: float, free_rects, origin=(0.0, 0.0)) -> OccupancyGrid:
    """Fully occupied grid with axis-aligned free rectangles ``(xmin, ymin, xmax, ymax)`` carved out.

    A cell is carved when its center lies inside a rectangle.
    """
    cells = np.ones((height, width), dtype=bool)
    xs = origin[0] + (np.arange(width) + 0.5) * resolution
    ys = origin[1] + (np.arange(height) + 0.5) * resolution
    for x0, y0, x1, y1 in free_rects:
        cmask = (xs > x0) & (xs < x1)
        rmask = (ys > y0) & (ys < y1)
        cells[np.ix_(rmask, cmask)] = False
    return OccupancyGrid(width, height, resolution, origin, cells)
