"""Bundled polygons, triangulations, and induction data used throughout.

The named fixtures are small enough to check by hand and exercise the edge
cases the verification layer cares about: the split unit square whose two
sign patterns on a diagonal differ, a hexagon with an interior point whose
star has six unimodular cells, and a pinwheel refinement of a subdivided
triangle that no height function induces.  random_polygons supplies a
deterministic pool for property suites.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .induction import InductionDatum
from .lattice_geometry import CollinearInput, LatticePolygon, Point2, convex_hull

PENTAGON = LatticePolygon(((0, 0), (4, 0), (4, 1), (3, 2), (1, 3)))

UNIT_SQUARE = LatticePolygon(((0, 0), (1, 0), (1, 1), (0, 1)))

# The diagonal runs (1,0)-(0,1), so the corner pair {(0,0),(1,1)} induces
# two isolated points rather than an edge.
CONIFOLD_TRIANGLES = (
    (Point2(0, 0), Point2(1, 0), Point2(0, 1)),
    (Point2(1, 0), Point2(1, 1), Point2(0, 1)),
)

UNIT_TRIANGLE = LatticePolygon(((0, 0), (1, 0), (0, 1)))

UNIT_TRIANGLE_TRIANGLES = ((Point2(0, 0), Point2(1, 0), Point2(0, 1)),)

HEXAGON = LatticePolygon(((0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)))

HEXAGON_CENTER = Point2(1, 1)

HEXAGON_STAR_TRIANGLES = tuple(
    (HEXAGON.vertices[i], HEXAGON.vertices[(i + 1) % 6], HEXAGON_CENTER)
    for i in range(6)
)


def hexagon_star_datum() -> InductionDatum:
    """The center as the average of all six corners."""
    sixth = Fraction(1, 6)
    return InductionDatum(
        HEXAGON.vertices,
        [(HEXAGON_CENTER, [(v, sixth) for v in HEXAGON.vertices])],
    )


PINWHEEL_TRIANGLE = LatticePolygon(((0, 0), (6, 0), (0, 6)))

_P = {
    1: Point2(0, 0),
    2: Point2(6, 0),
    3: Point2(0, 6),
    4: Point2(3, 0),
    5: Point2(3, 3),
    6: Point2(0, 3),
    7: Point2(2, 2),
    8: Point2(1, 1),
    9: Point2(4, 1),
    10: Point2(1, 4),
}

# A pinwheel refinement of the side-subdivided triangle: each corner joins
# the interior point one rotational step away, which rules out any height
# function inducing these cells.
PINWHEEL_TRIANGLES = tuple(
    tuple(_P[i] for i in cell)
    for cell in (
        (1, 4, 9),
        (4, 2, 9),
        (6, 1, 8),
        (3, 6, 8),
        (2, 10, 9),
        (2, 5, 10),
        (5, 3, 10),
        (3, 8, 10),
        (1, 9, 8),
        (8, 9, 7),
        (9, 10, 7),
        (10, 8, 7),
    )
)


def pinwheel_datum() -> InductionDatum:
    """Side midpoints, the centroid, and the three pinwheel points."""
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    return InductionDatum(
        PINWHEEL_TRIANGLE.vertices,
        [
            (_P[4], [(_P[1], half), (_P[2], half)]),
            (_P[5], [(_P[2], half), (_P[3], half)]),
            (_P[6], [(_P[1], half), (_P[3], half)]),
            (_P[7], [(_P[1], third), (_P[2], third), (_P[3], third)]),
            (_P[8], [(_P[1], half), (_P[7], half)]),
            (_P[9], [(_P[2], half), (_P[7], half)]),
            (_P[10], [(_P[3], half), (_P[7], half)]),
        ],
    )


def random_polygons(count: int = 20, seed: int = 271828) -> tuple:
    """Deterministic pool of small distinct polygons for property suites."""
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < count:
        pts = [
            (rng.randrange(0, 7), rng.randrange(0, 7))
            for _ in range(rng.randrange(4, 9))
        ]
        try:
            poly = convex_hull(pts)
        except (CollinearInput, ValueError):
            continue
        if poly.vertices in seen:
            continue
        seen.add(poly.vertices)
        out.append(poly)
    return tuple(out)
