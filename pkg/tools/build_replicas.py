"""Regenerate the bundled replica maps under src/lasmp/data/maps.

Each map is a 10 m x 10 m grid at 0.1 m resolution; everything is wall except the
listed free rectangles (xmin, ymin, xmax, ymax) in metres.

    python tools/build_replicas.py
"""

from pathlib import Path

from lasmp.gridmap import grid_from_rects

MAPS = {
    # domestic: corridor maze with rooms hanging off the main hall
    "de": [
        (0.6, 6.8, 9.4, 8.0),   # main hall
        (0.6, 4.8, 1.8, 8.0),   # west passage
        (0.6, 4.8, 4.0, 6.0),   # middle corridor
        (2.2, 1.2, 3.4, 6.0),   # south passage
        (2.2, 1.2, 8.0, 2.4),   # lower corridor
        (5.0, 8.4, 9.4, 9.6), (6.0, 8.0, 7.0, 8.4),   # bedroom + door
        (0.4, 8.4, 3.0, 9.6), (2.0, 8.0, 2.6, 8.4),   # kitchen + door
        (4.6, 2.8, 9.4, 6.2), (7.6, 6.2, 8.4, 6.8),   # living room + door
        (0.4, 1.0, 1.8, 4.2), (1.8, 3.0, 2.2, 3.6),   # bathroom + door
    ],
    # office: aisles between desk blocks
    "os": [
        (6.4, 5.6, 7.6, 9.4),
        (4.4, 5.6, 7.6, 6.8),
        (4.4, 3.6, 5.6, 6.8),
        (1.6, 3.6, 5.6, 4.8),
        (2.2, 0.6, 3.4, 4.8),
        (0.6, 8.2, 9.4, 9.4),   # top aisle
        (0.6, 5.8, 1.8, 9.4),   # west aisle (dead end)
        (8.2, 0.6, 9.4, 9.4),   # east aisle
        (4.0, 0.6, 9.4, 1.8),   # bottom aisle
    ],
    # random obstacles: lanes between blocks of different sizes
    "ro": [
        (0.2, 0.2, 9.8, 1.4),
        (7.0, 0.2, 8.2, 4.8),
        (0.2, 3.6, 9.8, 4.8),
        (5.0, 3.6, 6.0, 8.6),
        (3.2, 3.6, 4.4, 8.6),
        (8.6, 3.6, 9.8, 8.6),
        (0.2, 8.6, 9.8, 9.8),
        (0.2, 1.4, 1.0, 3.6),
        (1.4, 4.8, 2.4, 8.6),
        (6.6, 6.0, 8.6, 7.0),   # pocket off the east lane
    ],
    # building corridor with offices
    "ubc": [
        (7.9, 1.0, 9.1, 8.8),
        (3.0, 7.6, 9.1, 8.8),
        (3.0, 5.2, 4.2, 8.8),
        (0.4, 5.2, 4.2, 6.4),
        (0.6, 0.6, 6.6, 4.2), (1.2, 4.2, 2.0, 5.2),   # office block + door
        (5.0, 5.8, 7.4, 7.0), (5.6, 7.0, 6.4, 7.6),   # small office + door
    ],
}


def main():
    out = Path(__file__).resolve().parents[1] / "src" / "lasmp" / "data" / "maps"
    out.mkdir(parents=True, exist_ok=True)
    for name, rects in MAPS.items():
        grid = grid_from_rects(100, 100, 0.1, rects)
        (out / f"{name}.map").write_text(grid.to_text(), encoding="utf-8")
        print(f"{name}: {grid.occupied_count()} occupied cells")


if __name__ == "__main__":
    main()
