"""Deterministic SVG drawings of a map, a search tree and a path."""

from __future__ import annotations

from .gridmap import OccupancyGrid

STYLE = (
    ".obstacle{fill:#444}"
    ".edge{stroke:#e6c200;stroke-width:1}"
    ".vertex{fill:#2e9b3a}"
    ".path{fill:none;stroke:#d62728;stroke-width:2.5}"
    ".start{fill:#1f77b4}"
    ".goal{fill:#ff7f0e}"
)


def render(grid: OccupancyGrid, tree=None, path=None, start=None, goal=None, scale: float = 40.0) -> str:
    """SVG document; world y points up, so rows are flipped.

    Obstacles are drawn as one rectangle per horizontal run of occupied cells.
    Identical inputs give byte-identical output.
    """
    x0, y0 = grid.x_min, grid.y_min
    W, H = grid.extents
    px = lambda x: f"{(x - x0) * scale:.3f}"
    py = lambda y: f"{(H - (y - y0)) * scale:.3f}"
    cell = grid.resolution * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W * scale:.0f}" height="{H * scale:.0f}" '
        f'viewBox="0 0 {W * scale:.3f} {H * scale:.3f}">',
        f"<style>{STYLE}</style>",
        f'<rect width="{W * scale:.3f}" height="{H * scale:.3f}" fill="#fff"/>',
        '<g id="obstacles">',
    ]
    cells = grid.cells
    for row in range(grid.height):
        col = 0
        while col < grid.width:
            if not cells[row, col]:
                col += 1
                continue
            end = col
            while end < grid.width and cells[row, end]:
                end += 1
            top = y0 + (row + 1) * grid.resolution
            out.append(
                f'<rect class="obstacle" x="{px(x0 + col * grid.resolution)}" y="{py(top)}" '
                f'width="{(end - col) * cell:.3f}" height="{cell:.3f}"/>'
            )
            col = end
    out.append("</g>")

    if tree is not None:
        out.append('<g id="tree">')
        for p, c in tree.edges():
            a, b = tree.node(p), tree.node(c)
            out.append(f'<line class="edge" x1="{px(a.x)}" y1="{py(a.y)}" x2="{px(b.x)}" y2="{py(b.y)}"/>')
        for s in tree.nodes:
            out.append(f'<circle class="vertex" cx="{px(s.x)}" cy="{py(s.y)}" r="2.5"/>')
        out.append("</g>")

    if path is not None and len(path.states) >= 2:
        pts = " ".join(f"{px(s[0])},{py(s[1])}" for s in path.states)
        out.append(f'<polyline class="path" points="{pts}"/>')

    for cls, pose in (("start", start), ("goal", goal)):
        if pose is not None:
            p = getattr(pose, "position", pose)
            out.append(f'<circle class="{cls}" cx="{px(p[0])}" cy="{py(p[1])}" r="6"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
