import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nccr.lattice_geometry import (
    CharacterGroup,
    CollinearCorner,
    CollinearInput,
    IndexMismatch,
    LatticePolygon,
    NotPrimitiveEdge,
    Point2,
    UnimodularMap,
    class_character,
    convex_hull,
    group_weights,
    lattice_points,
    normalize_corner,
    normalized_volume,
    segment_lattice_points,
    smith_left_transform,
)

PENTAGON = LatticePolygon([(0, 0), (4, 0), (4, 1), (3, 2), (1, 3)])
SQUARE = LatticePolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
TRIANGLE = LatticePolygon([(0, 0), (1, 0), (0, 1)])


def brute_hull_vertices(pts):
    # A point is a hull vertex iff it is not in the hull of the others,
    # checked by exhausting triangles (plus segment degeneracies).
    pts = sorted(set(Point2(*p) for p in pts))

    def inside_triangle(p, a, b, c):
        d1 = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        d2 = (c[0] - b[0]) * (p[1] - b[1]) - (c[1] - b[1]) * (p[0] - b[0])
        d3 = (a[0] - c[0]) * (p[1] - c[1]) - (a[1] - c[1]) * (p[0] - c[0])
        return (d1 >= 0 and d2 >= 0 and d3 >= 0) or (d1 <= 0 and d2 <= 0 and d3 <= 0)

    def on_segment(p, a, b):
        if (b[0] - a[0]) * (p[1] - a[1]) != (b[1] - a[1]) * (p[0] - a[0]):
            return False
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])

    out = []
    for p in pts:
        rest = [q for q in pts if q != p]
        covered = any(inside_triangle(p, a, b, c) for a, b, c in itertools.combinations(rest, 3))
        covered = covered or any(on_segment(p, a, b) for a, b in itertools.combinations(rest, 2))
        if not covered:
            out.append(p)
    return set(out)


def test_convex_hull_triangle_passthrough():
    assert convex_hull([(0, 0), (1, 0), (0, 1)]) == TRIANGLE


def test_convex_hull_drops_interior_points():
    got = convex_hull([(0, 0), (4, 0), (4, 1), (3, 2), (1, 3), (1, 1), (2, 1)])
    assert got == PENTAGON
    assert brute_hull_vertices([(0, 0), (4, 0), (4, 1), (3, 2), (1, 3), (1, 1), (2, 1)]) == set(
        PENTAGON.vertices
    )


def test_convex_hull_absorbs_edge_midpoint():
    got = convex_hull([(0, 0), (2, 0), (1, 0), (0, 2)])
    assert got.vertices == (Point2(0, 0), Point2(2, 0), Point2(0, 2))


def test_convex_hull_collinear_raises():
    with pytest.raises(CollinearInput):
        convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])


def test_convex_hull_idempotent_and_order_insensitive():
    pts = [(0, 0), (4, 0), (4, 1), (3, 2), (1, 3), (2, 2), (1, 1)]
    h1 = convex_hull(pts)
    h2 = convex_hull(list(reversed(pts)))
    assert h1 == h2 == convex_hull(h1.vertices)


def test_polygon_canonical_rotation_and_orientation():
    cw = LatticePolygon([(1, 3), (3, 2), (4, 1), (4, 0), (0, 0)])
    assert cw == PENTAGON
    assert PENTAGON.vertices[0] == Point2(0, 0)


def test_polygon_rejects_collinear_vertex():
    with pytest.raises(ValueError):
        LatticePolygon([(0, 0), (1, 0), (2, 0), (0, 2)])


def test_lattice_points_small():
    assert set(lattice_points(TRIANGLE)) == {(0, 0), (1, 0), (0, 1)}
    assert set(lattice_points(SQUARE)) == {(0, 0), (1, 0), (1, 1), (0, 1)}


def test_lattice_points_pentagon_scan_is_ground_truth():
    # Direct scan count. Cross-checked against Pick below; the edge gcds are
    # 4+1+1+1+1, so boundary = 8, interior = 5.
    pts = lattice_points(PENTAGON)
    assert len(pts) == 13
    boundary = [p for p in pts if not PENTAGON.contains_interior(p)]
    assert len(boundary) == 8
    assert len(pts) - len(boundary) == 5


def test_normalized_volume_examples():
    assert normalized_volume(PENTAGON) == 16
    assert normalized_volume(SQUARE) == 2
    assert normalized_volume(TRIANGLE) == 1


def random_polygon(rng, span=6, max_tries=200):
    for _ in range(max_tries):
        pts = [(rng.randint(0, span), rng.randint(0, span)) for _ in range(rng.randint(4, 9))]
        try:
            return convex_hull(pts)
        except CollinearInput:
            continue
    raise AssertionError("could not sample a polygon")


def test_pick_consistency_random_polygons():
    rng = random.Random(20260822)
    for _ in range(40):
        poly = random_polygon(rng)
        pts = lattice_points(poly)
        boundary = sum(1 for p in pts if not poly.contains_interior(p))
        interior = len(pts) - boundary
        assert normalized_volume(poly) == 2 * interior + boundary - 2


def test_segment_lattice_points():
    assert segment_lattice_points((0, 0), (3, 0)) == [(1, 0), (2, 0)]
    assert segment_lattice_points((0, 0), (2, 2)) == [(1, 1)]
    assert segment_lattice_points((0, 0), (3, 1)) == []
    assert segment_lattice_points((3, 0), (0, 0)) == [(2, 0), (1, 0)]


def test_normalize_corner_identity_cases():
    n, q, m = normalize_corner(((0, 0), (0, 1), (5, -3)))
    assert (n, q) == (5, 3)
    assert m == UnimodularMap(1, 0, 0, 1)
    n, q, m = normalize_corner(((0, 0), (0, 1), (3, 0)))
    assert (n, q) == (3, 0)
    assert m == UnimodularMap(1, 0, 0, 1)


def test_normalize_corner_errors():
    with pytest.raises(CollinearCorner):
        normalize_corner(((0, 0), (0, 1), (0, -1)))
    with pytest.raises(NotPrimitiveEdge):
        normalize_corner(((0, 0), (0, 2), (1, 0)))
    with pytest.raises(NotPrimitiveEdge):
        normalize_corner(((0, 0), (0, 1), (4, -2)))


@settings(max_examples=120, deadline=None)
@given(
    st.sampled_from([(1, 0, 0, 1), (0, 1, 1, 0), (1, 1, 0, 1), (2, 1, 1, 1), (3, -2, 1, -1), (1, 4, 0, -1)]),
    st.integers(-10, 10),
    st.integers(-10, 10),
)
def test_normalize_corner_unimodular_invariance(mat, tx, ty):
    g = UnimodularMap(*mat, tx, ty)
    triple = [g.apply(p) for p in ((0, 0), (0, 1), (5, -3))]
    n, q, m = normalize_corner(triple)
    assert (n, q) == (5, 3)
    assert [m.apply(p) for p in triple] == [(0, 0), (0, 1), (5, -3)]


def test_normalize_corner_round_trip_random():
    rng = random.Random(5)
    mats = [(1, 0, 0, 1), (1, 1, 0, 1), (0, -1, 1, 0), (2, 1, 1, 1), (5, 2, 2, 1), (1, -3, 0, -1)]
    corners = [((0, 0), (0, 1), (5, -3)), ((0, 0), (0, 1), (7, -2)), ((0, 0), (0, 1), (2, -1))]
    for _ in range(60):
        g = UnimodularMap(*rng.choice(mats), rng.randint(-8, 8), rng.randint(-8, 8))
        base = rng.choice(corners)
        n0, q0, _ = normalize_corner(base)
        triple = [g.apply(p) for p in base]
        n, q, m = normalize_corner(triple)
        assert (n, q) == (n0, q0)
        assert [m.apply(p) for p in triple] == [(0, 0), (0, 1), (n, -q)]


def test_smith_left_transform_identifies_cokernel():
    rows = [[2, 0], [0, 2], [0, 0]]
    u, diag = smith_left_transform(rows)
    assert diag[:2] == [2, 2]
    det = (
        u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
        - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
        + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0])
    )
    assert abs(det) == 1


def test_group_weights_unit_triangle_trivial():
    g = group_weights(TRIANGLE)
    assert g.rank == 0
    assert g.torsion == ()
    assert all(w == () for w in g.weights)
    assert g.order() == 1


def test_group_weights_square():
    g = group_weights(SQUARE)
    assert g.rank == 1
    assert g.torsion == ()
    flat = [w[0] for w in g.weights]
    assert flat in ([1, -1, 1, -1], [-1, 1, -1, 1])


def test_group_weights_pentagon_rank():
    g = group_weights(PENTAGON)
    assert g.rank == 2
    assert g.torsion == ()


def test_group_weights_kernel_property():
    rng = random.Random(99)
    for poly in (PENTAGON, SQUARE, TRIANGLE):
        g = group_weights(poly)
        zero = tuple([0] * (len(g.torsion) + g.rank))
        for _ in range(1000):
            m = (rng.randint(-10, 10), rng.randint(-10, 10), rng.randint(-10, 10))
            img = [m[0] * v[0] + m[1] * v[1] + m[2] for v in poly.vertices]
            assert class_character(img, g) == zero


def test_class_character_examples():
    g = group_weights(SQUARE)
    assert class_character([0, 0, 0, 0], g) == (0,)
    gen = class_character([0, 0, 1, 0], g)
    assert gen in ((1,), (-1,))
    m = (1, 2, -3)
    b = [3, 1, 4, 1]
    shift = [m[0] * v[0] + m[1] * v[1] + m[2] for v in SQUARE.vertices]
    assert class_character(b, g) == class_character([x + y for x, y in zip(b, shift)], g)


def test_class_character_additivity():
    g = group_weights(PENTAGON)
    rng = random.Random(3)
    for _ in range(50):
        b1 = [rng.randint(-6, 6) for _ in range(5)]
        b2 = [rng.randint(-6, 6) for _ in range(5)]
        lhs = class_character([x + y for x, y in zip(b1, b2)], g)
        c1, c2 = class_character(b1, g), class_character(b2, g)
        total = [x + y for x, y in zip(c1, c2)]
        for i, d in enumerate(g.torsion):
            total[i] %= d
        assert lhs == tuple(total)


def test_class_character_index_mismatch():
    g = group_weights(SQUARE)
    with pytest.raises(IndexMismatch):
        class_character([0, 0, 0], g)


def test_character_group_with_torsion():
    # Cone over the (2,0),(0,2) square: index-4 quotient with torsion.
    big = LatticePolygon([(0, 0), (2, 0), (2, 2), (0, 2)])
    g = group_weights(big)
    assert g.rank == 1
    assert g.torsion == (2, 2)
    rng = random.Random(11)
    zero = (0, 0, 0)
    for _ in range(200):
        m = (rng.randint(-7, 7), rng.randint(-7, 7), rng.randint(-7, 7))
        img = [m[0] * v[0] + m[1] * v[1] + m[2] for v in big.vertices]
        assert class_character(img, g) == zero
