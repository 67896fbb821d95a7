"""Static SVG drawings of polygons and cutting plans.

Output is assembled from sorted primitive lists with integer pixel
coordinates only, so identical inputs produce byte-identical documents.
A bare polygon renders as grid plus outline; a plan adds the triangulation
cells and edges, every nested outline, the spoke diagonals a corner cut
introduces to chain-interior vertices, and ring markers on shaved vertices.
"""

from __future__ import annotations

from typing import Mapping

from .lattice_geometry import LatticePolygon, Point2, as_point

SCALE = 40
MARGIN = 1

_STYLE = (
    "<style>"
    ".grid{stroke:#dddbd4;stroke-width:1}"
    ".cell{fill:#f3ede2;stroke:none}"
    ".edge{stroke:#8a8578;stroke-width:2;stroke-linecap:round}"
    ".outline{fill:none;stroke:#23272e;stroke-width:3;stroke-linejoin:round}"
    ".diagonal{stroke:#b5452e;stroke-width:4;stroke-linecap:round}"
    ".removed{fill:none;stroke:#b5452e;stroke-width:2}"
    ".vertex{fill:#23272e}"
    "</style>"
)


def _plan_parts(plan: Mapping):
    polys = [
        tuple(as_point(v) for v in entry["vertices"]) for entry in plan["nested"]
    ]
    triangles = [tuple(as_point(p) for p in t) for t in plan["triangles"]]
    stages = [tuple(as_point(p) for p in s) for s in plan["stage_vertices"]]
    cuts = [
        (as_point(c["removed"]), tuple(as_point(p) for p in c["chain"]))
        for c in plan["cuts"]
    ]
    return polys, triangles, stages, cuts


def cut_diagonals(plan: Mapping) -> list:
    """Spokes from a removed vertex to chain-interior stage vertices.

    A two-point chain closes its region with boundary edges alone; only
    longer chains force interior diagonals, and those are the edges the
    drawings emphasize.
    """
    _, _, stages, cuts = _plan_parts(plan)
    out = []
    for k, (removed, chain) in enumerate(cuts):
        targets = [p for p in chain if p in set(stages[k + 1])]
        out.extend((removed, t) for t in targets[1:-1])
    return out


def render_svg(source) -> str:
    """Deterministic SVG for a polygon or a full cutting plan."""
    if isinstance(source, LatticePolygon):
        return _render(list(source.vertices), [source.vertices], [], [], [], [])
    if "triangles" not in source:
        poly = LatticePolygon(source["vertices"])
        return _render(list(poly.vertices), [poly.vertices], [], [], [], [])
    polys, triangles, _, cuts = _plan_parts(source)
    verts = sorted({p for t in triangles for p in t})
    scope = verts + [p for cycle in polys for p in cycle]
    edges = set()
    for a, b, c in triangles:
        for u, w in ((a, b), (b, c), (a, c)):
            edges.add((u, w) if u < w else (w, u))
    diagonals = cut_diagonals(source) if source.get("mode") == "gulotta" else []
    markers = [removed for removed, _ in cuts] if source.get("mode") == "iu" else []
    return _render(scope, polys, sorted(triangles), sorted(edges), diagonals, markers)


def _render(scope, outlines, cells, edges, diagonals, markers) -> str:
    xs = [p.x for p in scope]
    ys = [p.y for p in scope]
    x0, x1 = min(xs) - MARGIN, max(xs) + MARGIN
    y0, y1 = min(ys) - MARGIN, max(ys) + MARGIN

    def px(p) -> tuple:
        return ((p[0] - x0) * SCALE, (y1 - p[1]) * SCALE)

    width = (x1 - x0) * SCALE
    height = (y1 - y0) * SCALE
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        _STYLE,
        f'<rect width="{width}" height="{height}" fill="#fdfcf9"/>',
    ]
    for gx in range(x0, x1 + 1):
        X = (gx - x0) * SCALE
        lines.append(f'<line class="grid" x1="{X}" y1="0" x2="{X}" y2="{height}"/>')
    for gy in range(y0, y1 + 1):
        Y = (y1 - gy) * SCALE
        lines.append(f'<line class="grid" x1="0" y1="{Y}" x2="{width}" y2="{Y}"/>')
    for cell in cells:
        pts = " ".join("{},{}".format(*px(p)) for p in cell)
        lines.append(f'<polygon class="cell" points="{pts}"/>')
    for u, w in edges:
        (ax, ay), (bx, by) = px(u), px(w)
        lines.append(f'<line class="edge" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
    for cycle in outlines:
        pts = " ".join("{},{}".format(*px(p)) for p in cycle)
        lines.append(f'<polygon class="outline" points="{pts}"/>')
    for u, w in diagonals:
        (ax, ay), (bx, by) = px(u), px(w)
        lines.append(
            f'<line class="diagonal" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>'
        )
    for p in markers:
        X, Y = px(p)
        lines.append(f'<circle class="removed" cx="{X}" cy="{Y}" r="9"/>')
    if cells:
        for p in sorted({q for t in cells for q in t}):
            X, Y = px(p)
            lines.append(f'<circle class="vertex" cx="{X}" cy="{Y}" r="4"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
