"""Exact lattice polygon primitives.

Everything here is integer arithmetic: points are int pairs, polygons are
strictly convex counterclockwise vertex cycles, and the character group of a
polygon is computed from a Smith normal form over the integers. No floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, NamedTuple, Sequence


class CollinearInput(ValueError):
    """Hull input spans a line (or less), so no polygon exists."""


class NotPrimitiveEdge(ValueError):
    """Corner leg contains an interior lattice point where none is allowed."""


class CollinearCorner(ValueError):
    """Corner legs are parallel, so the corner spans no cone."""


class IndexMismatch(ValueError):
    """Weight vector length disagrees with the character group."""


class Point2(NamedTuple):
    x: int
    y: int


class Functional3(NamedTuple):
    """Affine functional a*x + b*y + c on lattice points."""

    a: int
    b: int
    c: int

    def value(self, p: Point2) -> int:
        return self.a * p[0] + self.b * p[1] + self.c


def as_point(p) -> Point2:
    q = Point2(int(p[0]), int(p[1]))
    if q[0] != p[0] or q[1] != p[1]:
        raise ValueError(f"not a lattice point: {p!r}")
    return q


def cross(o: Point2, a: Point2, b: Point2) -> int:
    """Twice the signed area of the triangle (o, a, b)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class LatticePolygon:
    """Strictly convex lattice polygon in canonical form.

    Vertices may be supplied in either cyclic orientation; they are stored
    counterclockwise starting from the lexicographically smallest vertex.
    Collinear triples among the supplied vertices are rejected, so the stored
    cycle lists exactly the corners.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable) -> None:
        verts = [as_point(v) for v in vertices]
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if len(set(verts)) != len(verts):
            raise ValueError("repeated vertex")
        area2 = sum(
            verts[i][0] * verts[(i + 1) % len(verts)][1]
            - verts[(i + 1) % len(verts)][0] * verts[i][1]
            for i in range(len(verts))
        )
        if area2 < 0:
            verts.reverse()
        elif area2 == 0:
            raise ValueError("degenerate vertex cycle")
        k = len(verts)
        for i in range(k):
            if cross(verts[i - 1], verts[i], verts[(i + 1) % k]) <= 0:
                raise ValueError("vertices are not in strictly convex position")
        start = min(range(k), key=lambda i: verts[i])
        object.__setattr__(self, "vertices", tuple(verts[start:] + verts[:start]))

    def __setattr__(self, name, value):
        raise AttributeError("LatticePolygon is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"LatticePolygon({list(self.vertices)!r})"

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Point2, Point2]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, p) -> bool:
        p = Point2(p[0], p[1])
        return all(cross(a, b, p) >= 0 for a, b in self.edges())

    def contains_interior(self, p) -> bool:
        p = Point2(p[0], p[1])
        return all(cross(a, b, p) > 0 for a, b in self.edges())

    def bounding_box(self) -> tuple[int, int, int, int]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def translated(self, dx: int, dy: int) -> "LatticePolygon":
        return LatticePolygon(Point2(v[0] + dx, v[1] + dy) for v in self.vertices)


@dataclass(frozen=True)
class UnimodularMap:
    """Affine lattice automorphism p -> A p + t with det A = +-1."""

    a: int
    b: int
    c: int
    d: int
    tx: int = 0
    ty: int = 0

    def __post_init__(self) -> None:
        if abs(self.a * self.d - self.b * self.c) != 1:
            raise ValueError("matrix is not unimodular")

    def apply(self, p) -> Point2:
        return Point2(
            self.a * p[0] + self.b * p[1] + self.tx,
            self.c * p[0] + self.d * p[1] + self.ty,
        )

    def inverse(self) -> "UnimodularMap":
        det = self.a * self.d - self.b * self.c
        ia, ib, ic, id_ = det * self.d, -det * self.b, -det * self.c, det * self.a
        return UnimodularMap(
            ia, ib, ic, id_, -(ia * self.tx + ib * self.ty), -(ic * self.tx + id_ * self.ty)
        )


IDENTITY_MAP = UnimodularMap(1, 0, 0, 1)


def convex_hull(points: Iterable) -> LatticePolygon:
    """Convex hull as a LatticePolygon (Andrew's monotone chain).

    Raises CollinearInput when the points span at most a line.
    """
    pts = sorted(set(as_point(p) for p in points))
    if len(pts) < 3:
        raise CollinearInput("need 3 affinely independent points")
    lower: list[Point2] = []
    for p in pts:
        while len(lower) > 1 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(pts):
        while len(upper) > 1 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise CollinearInput("points are collinear")
    return LatticePolygon(hull)


def lattice_points(polygon: LatticePolygon) -> list[Point2]:
    """All lattice points of the polygon, lexicographically sorted.

    Plain bounding-box scan with exact containment tests; the scan is the
    ground truth and doubles as the oracle for the Pick identity test.
    """
    x0, y0, x1, y1 = polygon.bounding_box()
    out = []
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            p = Point2(x, y)
            if polygon.contains(p):
                out.append(p)
    return out


def normalized_volume(polygon: LatticePolygon) -> int:
    """Twice the Euclidean area (the lattice-normalized volume)."""
    v = polygon.vertices
    return sum(
        v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1]
        for i in range(len(v))
    )


def segment_lattice_points(a, b) -> list[Point2]:
    """Lattice points strictly between a and b, ordered from a to b."""
    a, b = as_point(a), as_point(b)
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = gcd(abs(dx), abs(dy))
    if g == 0:
        return []
    sx, sy = dx // g, dy // g
    return [Point2(a[0] + i * sx, a[1] + i * sy) for i in range(1, g)]


def normalize_corner(corner: Sequence) -> tuple[int, int, UnimodularMap]:
    """Normalize a corner (apex, first leg point, second leg point).

    Returns (n, q, map) where the map is an affine unimodular transformation
    sending apex to (0,0), the first leg point to (0,1) and the second leg
    point to (n,-q) with 0 <= q < n. The first leg must be primitive. The
    second leg may be imprimitive only when q comes out 0 (the smooth
    degenerate corner, where the leg direction maps to the positive x-axis).
    """
    apex, p0, p1 = (as_point(p) for p in corner)
    u0 = Point2(p0[0] - apex[0], p0[1] - apex[1])
    u1 = Point2(p1[0] - apex[0], p1[1] - apex[1])
    if u0 == (0, 0) or u1 == (0, 0):
        raise CollinearCorner("corner legs must be nondegenerate")
    det = u0[0] * u1[1] - u0[1] * u1[0]
    if det == 0:
        raise CollinearCorner("corner legs are parallel")
    if gcd(abs(u0[0]), abs(u0[1])) != 1:
        raise NotPrimitiveEdge(f"leg to {p0} is not primitive")
    n = abs(det)
    # Row (p, s) completes u0 to a basis; the top row is +-rot(u0), with the
    # sign chosen so the second leg lands at positive x.
    g, p, s = _egcd(u0[0], u0[1])
    assert g == 1
    t = -1 if det > 0 else 1
    ra, rb = t * u0[1], -t * u0[0]
    y1 = p * u1[0] + s * u1[1]
    q = (-y1) % n
    shear = ((-q - y1) // n) if n else 0
    a, b = ra, rb
    c, d = p + shear * ra, s + shear * rb
    if q != 0 and gcd(n, q) != 1:
        raise NotPrimitiveEdge(f"leg to {p1} is not primitive")
    m = UnimodularMap(a, b, c, d, -(a * apex[0] + b * apex[1]), -(c * apex[0] + d * apex[1]))
    assert m.apply(apex) == (0, 0) and m.apply(p0) == (0, 1) and m.apply(p1) == (n, -q)
    return n, q, m


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_x, x = x, old_x - quo * x
        old_y, y = y, old_y - quo * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def smith_left_transform(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Diagonalize an integer matrix, tracking only the left transform.

    Returns (U, diag) with U unimodular (k x k) such that U @ A @ V is
    diagonal with the divisibility chain diag[0] | diag[1] | ... for some
    untracked unimodular V. Column operations change im(A) not at all, so U
    alone identifies the cokernel Z^k / im(A).
    """
    a = [list(map(int, row)) for row in rows]
    k = len(a)
    m = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def addmul_row(i, j, f):
        # row i += f * row j
        for c in range(m):
            a[i][c] += f * a[j][c]
        for c in range(k):
            u[i][c] += f * u[j][c]

    def swap_cols(i, j):
        for r in range(k):
            a[r][i], a[r][j] = a[r][j], a[r][i]

    def addmul_col(i, j, f):
        for r in range(k):
            a[r][i] += f * a[r][j]

    t = 0
    while t < min(k, m):
        # Find a pivot of minimal absolute value in the remaining block.
        pivot = None
        best = None
        for i in range(t, k):
            for j in range(t, m):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        dirty = False
        for i in range(t + 1, k):
            if a[i][t]:
                addmul_row(i, t, -(a[i][t] // a[t][t]))
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, m):
            if a[t][j]:
                addmul_col(j, t, -(a[t][j] // a[t][t]))
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        t += 1
    # Enforce the divisibility chain; merging column j into column i creates
    # the entry needed to redistribute the gcd, after which we rerun.
    while True:
        diag = [a[i][i] for i in range(min(k, m))]
        bad = None
        for i in range(len(diag) - 1):
            if diag[i] and diag[i + 1] % diag[i] != 0:
                bad = i
                break
            if diag[i] == 0 and diag[i + 1] != 0:
                bad = i
                break
        if bad is None:
            break
        addmul_col(bad, bad + 1, 1)
        t = bad
        while t < min(k, m):
            pivot = None
            best = None
            for i in range(t, k):
                for j in range(t, m):
                    v = abs(a[i][j])
                    if v and (best is None or v < best):
                        best, pivot = v, (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            swap_rows(t, pi)
            swap_cols(t, pj)
            dirty = False
            for i in range(t + 1, k):
                if a[i][t]:
                    addmul_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, m):
                if a[t][j]:
                    addmul_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            t += 1
    diag = [abs(a[i][i]) for i in range(min(k, m))]
    return u, diag


def _gauss_reduce(v: list[int], w: list[int]) -> tuple[list[int], list[int]]:
    """Lagrange reduction of a rank-2 row pair (shorter, near-orthogonal)."""

    def dot(x, y):
        return sum(a * b for a, b in zip(x, y))

    v, w = list(v), list(w)
    while True:
        if dot(v, v) > dot(w, w):
            v, w = w, v
        d = dot(v, v)
        if d == 0:
            break
        mu = round(dot(v, w) / d)
        if mu == 0:
            break
        w = [a - mu * b for a, b in zip(w, v)]
    return v, w


def _sign_normalize(row: list[int]) -> list[int]:
    for entry in row:
        if entry > 0:
            return row
        if entry < 0:
            return [-x for x in row]
    return row


@dataclass(frozen=True)
class CharacterGroup:
    """Cokernel of the ray pairing, with one weight per polygon vertex.

    Weight entries list torsion coordinates first (reduced modulo the
    matching order in ``torsion``) and then ``rank`` free coordinates.
    """

    rank: int
    torsion: tuple[int, ...]
    weights: tuple[tuple[int, ...], ...]

    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out


def group_weights(polygon: LatticePolygon) -> CharacterGroup:
    """Character group of the polygon's cone, as weights on its vertices.

    The pairing sends m = (m1, m2, m3) to its values on the rays (x, y, 1)
    over the vertices; weights generate the cokernel. The free block is
    Lagrange-reduced and sign-normalized so equal polygons give identical
    presentations.
    """
    verts = polygon.vertices
    k = len(verts)
    rows = [[v[0], v[1], 1] for v in verts]
    u, diag = smith_left_transform(rows)
    torsion = tuple(d for d in diag if d > 1)
    rank_im = sum(1 for d in diag if d != 0)
    free_rows = [u[i] for i in range(rank_im, k)]
    torsion_rows = [u[i] for i, d in enumerate(diag) if d > 1]
    torsion_orders = [d for d in diag if d > 1]
    if len(free_rows) == 2:
        r0, r1 = _gauss_reduce(free_rows[0], free_rows[1])
        free_rows = [r0, r1]
    free_rows = [_sign_normalize(r) for r in free_rows]
    weights = []
    for i in range(k):
        tor = tuple(torsion_rows[j][i] % torsion_orders[j] for j in range(len(torsion_rows)))
        free = tuple(r[i] for r in free_rows)
        weights.append(tor + free)
    return CharacterGroup(rank=len(free_rows), torsion=torsion, weights=tuple(weights))


def class_character(b: Sequence[int], group: CharacterGroup) -> tuple[int, ...]:
    """Character of a weight vector: the weighted sum of vertex weights.

    Torsion coordinates are reduced modulo their orders; vectors define the
    same module class exactly when their characters agree.
    """
    if len(b) != len(group.weights):
        raise IndexMismatch(f"{len(b)} entries for {len(group.weights)} vertices")
    s = len(group.torsion)
    total = [0] * (s + group.rank)
    for coeff, w in zip(b, group.weights):
        for i, entry in enumerate(w):
            total[i] += coeff * entry
    for i, d in enumerate(group.torsion):
        total[i] %= d
    return tuple(total)
