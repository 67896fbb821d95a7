"""Nested polygon sequences that peel an enclosing frame down to a target.

Two constructions produce the sequence.  Corner cutting starts from the
bounding rectangle and saws off lattice triangles at each rectangle corner,
choosing hypotenuse slopes from the Stern-Brocot stream.  Vertex shaving
starts from a right triangle and repeatedly drops one extreme vertex,
passing to the hull of the remaining lattice points.  Either way the cut
records carry enough data to cone the removed regions into triangles and to
spread weight vectors from the frame corners onto every vertex by convex
induction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

from .induction import (
    MINUS,
    PLUS,
    Corner,
    InductionDatum,
    WeightVector,
    steps_json,
    triangle_datum,
)
from .lattice_geometry import (
    LatticePolygon,
    Point2,
    as_point,
    convex_hull,
    cross,
    lattice_points,
    normalized_volume,
    segment_lattice_points,
)

Triangle = tuple[Point2, Point2, Point2]


class CutFailure(ValueError):
    """No admissible slope for a corner cut within the row bound."""


class StuckSequence(ValueError):
    """The peeling process cannot reach the target polygon."""


class NonTriangleRegion(ValueError):
    """Coned cells fail to tile a removed region; the chain and the vertex
    sets disagree."""


class NotConvex(ValueError):
    """A plan step's vertex does not sit on an edge of the previous polygon."""


class KeyMissing(ValueError):
    """Restriction asked for a vertex outside a weight vector's domain."""


@dataclass(frozen=True)
class CutRecord:
    """One peeling step: the vertex removed, the chain of boundary lattice
    points exposed in its place, and (for corner cuts) the hypotenuse slope."""

    removed: Point2
    chain: tuple[Point2, ...]
    slope: Optional[Fraction] = None


@dataclass(frozen=True)
class NestedSequence:
    """Polygons P_0 over ... over P_l with the cut connecting each pair."""

    polygons: tuple[LatticePolygon, ...]
    cuts: tuple[CutRecord, ...]

    def __post_init__(self):
        if len(self.polygons) != len(self.cuts) + 1:
            raise ValueError("need one more polygon than cuts")


@dataclass(frozen=True)
class SeedCollection:
    """Initial weight vectors on the frame corners."""

    base_vertices: tuple[Point2, ...]
    members: tuple[WeightVector, ...]

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise ValueError("seed members must be pairwise distinct")


@dataclass(frozen=True)
class Triangulation:
    """Triangles tiling the frame, with per-stage vertex bookkeeping.

    stage_vertices[i] collects the vertices of all polygons from stage i
    onward, cumulative_vertices[i] those up to stage i.  The plan extends a
    weight vector given on the frame corners to every vertex the stages can
    see; its step vertices cover all_vertices and may include extra chain
    points that never become polygon vertices.
    """

    mode: str
    all_vertices: tuple[Point2, ...]
    base_triangles: tuple[Triangle, ...]
    region_triangles: tuple[tuple[Triangle, ...], ...]
    triangles: tuple[Triangle, ...]
    stage_vertices: tuple[tuple[Point2, ...], ...]
    cumulative_vertices: tuple[tuple[Point2, ...], ...]
    plan: InductionDatum
    plan_signs: tuple[str, ...]

    def stage_triangles(self, i: int) -> tuple[Triangle, ...]:
        """Triangles lying inside the stage-i polygon."""
        if not 0 <= i <= len(self.region_triangles):
            raise ValueError(f"stage {i} out of range")
        return self.base_triangles + tuple(
            t for cells in self.region_triangles[i:] for t in cells
        )


def _primitive(dx: int, dy: int) -> Point2:
    g = gcd(abs(dx), abs(dy))
    return Point2(dx // g, dy // g)


def farey_slopes(corner: str) -> Iterator[Fraction]:
    """Stern-Brocot slope stream for one rectangle corner, row by row.

    Rows run 1/1; 1/2, 2/1; 1/3, 2/3, 3/2, 3/1; and so on, negated for the
    NE and SW corners where admissible hypotenuses fall.
    """
    if corner not in ("NW", "NE", "SE", "SW"):
        raise ValueError(f"unknown corner {corner!r}")
    sign = 1 if corner in ("NW", "SE") else -1
    queue = deque([(1, 1, (0, 1), (1, 0))])
    while True:
        num, den, lo, hi = queue.popleft()
        yield Fraction(sign * num, den)
        queue.append((num + lo[0], den + lo[1], lo, (num, den)))
        queue.append((num + hi[0], den + hi[1], (num, den), hi))


def embed_rectangle(polygon: LatticePolygon) -> tuple[LatticePolygon, LatticePolygon]:
    """Translate the polygon into the first quadrant touching both axes and
    return it with its bounding rectangle."""
    x0, y0, x1, y1 = polygon.bounding_box()
    moved = polygon.translated(-x0, -y0)
    c, d = x1 - x0, y1 - y0
    frame = LatticePolygon([(0, 0), (c, 0), (c, d), (0, d)])
    return moved, frame


def embed_triangle(polygon: LatticePolygon) -> tuple[LatticePolygon, LatticePolygon]:
    """Smallest right triangle with legs on the axes containing the moved
    polygon, minimizing leg sum c + d and then c."""
    x0, y0, x1, y1 = polygon.bounding_box()
    moved = polygon.translated(-x0, -y0)
    verts = moved.vertices
    bound = 2 * (x1 - x0 + y1 - y0)
    for total in range(2, bound + 1):
        for c in range(1, total):
            d = total - c
            if all(d * v.x + c * v.y <= c * d for v in verts):
                frame = LatticePolygon([(0, 0), (c, 0), (0, d)])
                return moved, frame
    raise ValueError("no enclosing triangle found")  # unreachable for convex input


def base_triangulation(polygon: LatticePolygon) -> list[Triangle]:
    """Fan from the canonical first vertex."""
    v = polygon.vertices
    return [(v[0], v[k], v[k + 1]) for k in range(1, len(v) - 1)]


def _leg(apex: Point2, toward: Point2) -> tuple[Point2, int]:
    d = Point2(toward.x - apex.x, toward.y - apex.y)
    u = _primitive(d.x, d.y)
    length = d.x // u.x if u.x else d.y // u.y
    return u, length


def gulotta_sequence(
    polygon: LatticePolygon, frame: LatticePolygon, max_rows: int = 10
) -> NestedSequence:
    """Corner-cut the rectangle down to the polygon.

    Corners are visited NW, NE, SE, SW.  Within a corner, cut sites queue up
    in the order they are exposed.  Each cut takes the earliest not yet
    consumed slope of the corner's stream that admits a lattice triangle:
    the hypotenuse direction must point strictly between the two legs, its
    endpoints must be lattice points on them, and the largest such triangle
    keeping the polygon inside must be nonzero.  Failure to find one within
    max_rows stream rows raises CutFailure.
    """
    c = max(v.x for v in frame.vertices)
    d = max(v.y for v in frame.vertices)
    if set(frame.vertices) != {(0, 0), (c, 0), (c, d), (0, d)}:
        raise ValueError("frame is not an axis-aligned rectangle at the origin")
    if not all(frame.contains(v) for v in polygon.vertices):
        raise ValueError("polygon does not fit in the frame")
    polygons = [frame]
    cuts: list[CutRecord] = []
    current = frame
    corners = [("NW", Point2(0, d)), ("NE", Point2(c, d)), ("SE", Point2(c, 0)), ("SW", Point2(0, 0))]
    for name, corner_pt in corners:
        slopes = []
        gen = farey_slopes(name)
        for _ in range(2 ** max_rows - 1):
            slopes.append(next(gen))
        consumed: set[Fraction] = set()
        queue: deque[Point2] = deque()
        queued: set[Point2] = set()
        if corner_pt in current.vertices and not polygon.contains(corner_pt):
            queue.append(corner_pt)
            queued.add(corner_pt)
        while queue:
            apex = queue.popleft()
            verts = current.vertices
            idx = verts.index(apex)
            prev_v = verts[idx - 1]
            next_v = verts[(idx + 1) % len(verts)]
            u1, len1 = _leg(apex, prev_v)
            u2, len2 = _leg(apex, next_v)
            cut = None
            for sl in slopes:
                if sl in consumed:
                    continue
                num, den = sl.numerator, sl.denominator
                # normal of the hypotenuse direction (den, num)
                alpha = -num * u1.x + den * u1.y
                beta = -num * u2.x + den * u2.y
                if alpha == 0 or beta == 0 or (alpha > 0) != (beta > 0):
                    continue
                g = gcd(abs(alpha), abs(beta))
                a0, b0 = abs(beta) // g, abs(alpha) // g
                k_hp = min(
                    (-num * (w.x - apex.x) + den * (w.y - apex.y)) // (a0 * alpha)
                    for w in polygon.vertices
                )
                k = min(len1 // a0, len2 // b0, k_hp)
                if k >= 1:
                    cut = (sl, k * a0, k * b0)
                    break
            if cut is None:
                raise CutFailure(f"no admissible slope at {name} corner site {apex}")
            sl, da, db = cut
            consumed.add(sl)
            a_pt = Point2(apex.x + da * u1.x, apex.y + da * u1.y)
            b_pt = Point2(apex.x + db * u2.x, apex.y + db * u2.y)
            chain = (a_pt, *segment_lattice_points(a_pt, b_pt), b_pt)
            nxt = convex_hull([v for v in verts if v != apex] + [a_pt, b_pt])
            polygons.append(nxt)
            cuts.append(CutRecord(apex, chain, sl))
            current = nxt
            for v in (a_pt, b_pt):
                if v in current.vertices and v not in queued and not polygon.contains(v):
                    queue.append(v)
                    queued.add(v)
    if current != polygon:
        raise StuckSequence("corner cutting finished away from the target polygon")
    return NestedSequence(tuple(polygons), tuple(cuts))


def _boundary_cycle(polygon: LatticePolygon) -> list[Point2]:
    out: list[Point2] = []
    for u, w in polygon.edges():
        out.append(u)
        out.extend(segment_lattice_points(u, w))
    return out


def iu_sequence(polygon: LatticePolygon, frame: LatticePolygon) -> NestedSequence:
    """Shave the frame down to the polygon one vertex at a time.

    Each step removes the largest vertex by (y, x) that is not a lattice
    point of the target and passes to the hull of the remaining lattice
    points.  The chain is the run of boundary lattice points of the new
    polygon replacing the removed vertex, read counterclockwise.
    """
    cc = max(v.x for v in frame.vertices)
    dd = max(v.y for v in frame.vertices)
    if set(frame.vertices) != {(0, 0), (cc, 0), (0, dd)}:
        raise ValueError("frame is not a right triangle with legs on the axes")
    if not all(frame.contains(v) for v in polygon.vertices):
        raise ValueError("polygon does not fit in the frame")
    polygons = [frame]
    cuts: list[CutRecord] = []
    current = frame
    while current != polygon:
        removable = [v for v in current.vertices if not polygon.contains(v)]
        if not removable:
            raise StuckSequence("every vertex lies on the target but the hulls differ")
        star = max(removable, key=lambda p: (p.y, p.x))
        verts = current.vertices
        idx = verts.index(star)
        prev_v = verts[idx - 1]
        next_v = verts[(idx + 1) % len(verts)]
        pts = [p for p in lattice_points(current) if p != star]
        nxt = convex_hull(pts)
        u1, _ = _leg(star, prev_v)
        u2, _ = _leg(star, next_v)
        a_pt = Point2(star.x + u1.x, star.y + u1.y)
        b_pt = Point2(star.x + u2.x, star.y + u2.y)
        cycle = _boundary_cycle(nxt)
        start = cycle.index(a_pt)
        chain = [a_pt]
        pos = start
        for _ in range(len(cycle)):
            if cycle[pos] == b_pt:
                break
            pos = (pos + 1) % len(cycle)
            chain.append(cycle[pos])
        else:
            raise StuckSequence(f"chain endpoints {a_pt}, {b_pt} not joined on the boundary")
        polygons.append(nxt)
        cuts.append(CutRecord(star, tuple(chain), None))
        current = nxt
    return NestedSequence(tuple(polygons), tuple(cuts))


def _edge_combination(
    polygon: LatticePolygon, v: Point2
) -> list[tuple[Point2, Fraction]]:
    for u, w in polygon.edges():
        if cross(u, w, v) != 0 or v in (u, w):
            continue
        if (
            min(u.x, w.x) <= v.x <= max(u.x, w.x)
            and min(u.y, w.y) <= v.y <= max(u.y, w.y)
        ):
            if w.x != u.x:
                t = Fraction(v.x - u.x, w.x - u.x)
            else:
                t = Fraction(v.y - u.y, w.y - u.y)
            return [(u, 1 - t), (w, t)]
    raise NotConvex(f"{v} is not interior to an edge of the previous polygon")


def _uniform_sign(signs_config) -> str:
    if signs_config is None:
        return MINUS
    if signs_config in (PLUS, MINUS):
        return signs_config
    raise ValueError(f"bad sign configuration {signs_config!r}")


def induction_plan(
    seq: NestedSequence, mode: str, signs_config=None
) -> tuple[InductionDatum, tuple[str, ...]]:
    """Convex-combination steps carrying frame-corner weights to all vertices.

    Corner-cut mode gives every vertex first appearing at stage i a two-term
    step on the endpoints of the edge of P_{i-1} it lies on; signs_config
    may be a uniform sign or a per-step sequence (default all minus).
    Shaving mode steps the chain endpoints the same way with a uniform
    configured sign, then walks the interior chain points with the corner
    recursion steps, whose minus signs are fixed.
    """
    if mode not in ("gulotta", "iu"):
        raise ValueError(f"unknown mode {mode!r}")
    base = seq.polygons[0].vertices
    present = set(base)
    steps: list[tuple[Point2, list[tuple[Point2, Fraction]]]] = []
    signs: list[str] = []
    per_step = isinstance(signs_config, (list, tuple)) and mode == "gulotta"
    uniform = MINUS if per_step else _uniform_sign(signs_config)
    for k, cut in enumerate(seq.cuts):
        prev_poly = seq.polygons[k]
        ends = [cut.chain[0], cut.chain[-1]]
        for v in ends:
            if v in present:
                continue
            steps.append((v, _edge_combination(prev_poly, v)))
            signs.append(uniform)
            present.add(v)
        if mode == "iu" and len(cut.chain) > 2:
            corner = Corner(cut.removed, ends[0], ends[1], tuple(cut.chain[1:-1]))
            for st in triangle_datum(corner).steps:
                if st.vertex in present:
                    continue
                steps.append((st.vertex, list(st.coeffs)))
                signs.append(MINUS)
                present.add(st.vertex)
    if per_step:
        if len(signs_config) != len(steps):
            raise ValueError(f"need {len(steps)} signs, got {len(signs_config)}")
        if any(s not in (PLUS, MINUS) for s in signs_config):
            raise ValueError("signs must be '+' or '-'")
        signs = list(signs_config)
    return InductionDatum(base, steps), tuple(signs)


def assemble(seq: NestedSequence, base: Sequence[Triangle], signs_config=None) -> Triangulation:
    """Cone the removed regions onto the base triangulation of the target.

    Each cut's region is fanned from its removed vertex to the chain points
    that survive as stage vertices; collinear slivers along the legs are
    empty and skipped.  Region areas are rechecked exactly, so a chain that
    disagrees with the vertex bookkeeping raises NonTriangleRegion.
    """
    polys = seq.polygons
    cuts = seq.cuts
    l = len(cuts)
    mode = "iu" if (cuts and cuts[0].slope is None) else "gulotta"
    vsets = [set(p.vertices) for p in polys]
    stage: list[set[Point2]] = []
    acc: set[Point2] = set()
    for vs in reversed(vsets):
        acc |= vs
        stage.append(set(acc))
    stage.reverse()
    cum: list[set[Point2]] = []
    acc = set()
    for vs in vsets:
        acc |= vs
        cum.append(set(acc))
    if mode == "gulotta":
        for k in range(l):
            if len(stage[k] - stage[k + 1]) != 1:
                raise ValueError(f"stage {k} drops {len(stage[k]-stage[k+1])} vertices, not 1")
    base_tris = tuple(
        (as_point(a), as_point(b), as_point(c)) for a, b, c in base
    )
    area = sum(abs(cross(*t)) for t in base_tris)
    if any(cross(*t) == 0 for t in base_tris) or area != normalized_volume(polys[-1]):
        raise NonTriangleRegion("base triangles do not tile the target polygon")
    regions: list[tuple[Triangle, ...]] = []
    for k, cut in enumerate(cuts):
        targets = [p for p in cut.chain if p in stage[k + 1]]
        cells: list[Triangle] = []
        got = 0
        for t1, t2 in zip(targets, targets[1:]):
            doubled = cross(cut.removed, t1, t2)
            if doubled == 0:
                continue
            cells.append((cut.removed, t1, t2))
            got += abs(doubled)
        want = normalized_volume(polys[k]) - normalized_volume(polys[k + 1])
        if got != want:
            raise NonTriangleRegion(f"cut {k}: cones cover {got}, region measures {want}")
        regions.append(tuple(cells))
    datum, signs = induction_plan(seq, mode, signs_config)
    return Triangulation(
        mode=mode,
        all_vertices=tuple(sorted(stage[0])),
        base_triangles=base_tris,
        region_triangles=tuple(regions),
        triangles=base_tris + tuple(t for cells in regions for t in cells),
        stage_vertices=tuple(tuple(sorted(s)) for s in stage),
        cumulative_vertices=tuple(tuple(sorted(s)) for s in cum),
        plan=datum,
        plan_signs=signs,
    )


def seed_gulotta(c: int, d: int) -> SeedCollection:
    """The 2cd corner weight vectors for a c by d rectangle frame."""
    if c < 1 or d < 1:
        raise ValueError("frame sides must be positive")
    corners = (Point2(0, 0), Point2(c, 0), Point2(c, d), Point2(0, d))
    members = []
    for eps in (0, 1):
        for i in range(c):
            for j in range(d):
                vals = (0, i, i + j + eps, j)
                members.append(WeightVector(dict(zip(corners, vals))))
    return SeedCollection(corners, tuple(members))


def seed_iu(c: int, d: int) -> SeedCollection:
    """The cd corner weight vectors for a right triangle frame."""
    if c < 1 or d < 1:
        raise ValueError("frame legs must be positive")
    corners = (Point2(0, 0), Point2(c, 0), Point2(0, d))
    members = [
        WeightVector({corners[0]: i, corners[1]: j, corners[2]: 1})
        for i in range(c)
        for j in range(d)
    ]
    return SeedCollection(corners, tuple(members))


def restrict(collection: Iterable[WeightVector], keys: Iterable) -> list[WeightVector]:
    """Restrict every member to the given vertex subset, keeping duplicates."""
    kk = tuple(as_point(p) for p in keys)
    out = []
    for w in collection:
        for p in kk:
            if p not in w:
                raise KeyMissing(f"{p} is not in the weight vector's domain")
        out.append(w.restrict(kk))
    return out


def plan_json(seq: NestedSequence, tri: Triangulation) -> dict:
    """JSON-ready description of the sequence, triangles, and plan."""

    def pt(p: Point2) -> list[int]:
        return [p.x, p.y]

    return {
        "polygon_0": {"vertices": [pt(v) for v in seq.polygons[0].vertices]},
        "nested": [{"vertices": [pt(v) for v in p.vertices]} for p in seq.polygons],
        "cuts": [
            {
                "removed": pt(cut.removed),
                "chain": [pt(p) for p in cut.chain],
                "slope": None
                if cut.slope is None
                else f"{cut.slope.numerator}/{cut.slope.denominator}",
            }
            for cut in seq.cuts
        ],
        "triangles": [[pt(a), pt(b), pt(c)] for a, b, c in tri.triangles],
        "stage_vertices": [[pt(p) for p in s] for s in tri.stage_vertices],
        "plan": {
            "base": [pt(p) for p in tri.plan.base],
            "steps": steps_json(tri.plan, tri.plan_signs),
        },
        "mode": tri.mode,
    }
