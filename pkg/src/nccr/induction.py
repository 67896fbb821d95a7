"""Convex induction of integer weight vectors.

A weight vector assigns an integer to each vertex of a configuration. New
vertices that are convex combinations of existing ones receive the floor or
ceiling of the combined value, per a chosen sign; this module provides the
generic induction operator, the interval and triangle special cases with
their exact reference data, and the sign-pattern predicates that certified
induced vectors must satisfy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Mapping, NamedTuple, Sequence

from .hj import hj_expand
from .lattice_geometry import (
    Functional3,
    Point2,
    as_point,
    cross,
    normalize_corner,
    segment_lattice_points,
)

PLUS = "+"
MINUS = "-"


class DomainMismatch(ValueError):
    """Weight vector or sign sequence does not fit the induction datum."""


class BadOrdering(ValueError):
    """Interval ordering lists a point off the open segment, or misses one."""


class ChainMismatch(ValueError):
    """Supplied corner chain differs from the lattice hull chain."""


class NotInduced(ValueError):
    """No floor/ceiling witness reproduces the difference vector."""


def sign_of(value) -> str:
    """'+' for value >= 0, '-' otherwise."""
    return PLUS if value >= 0 else MINUS


def _functional(m) -> Functional3:
    return m if isinstance(m, Functional3) else Functional3(int(m[0]), int(m[1]), int(m[2]))


class WeightVector(Mapping):
    """Immutable integer weights keyed by lattice point."""

    __slots__ = ("_entries",)

    def __init__(self, entries) -> None:
        out: dict[Point2, int] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for k, v in items:
            p = as_point(k)
            if p in out:
                raise ValueError(f"repeated key {p}")
            if isinstance(v, float):
                raise ValueError("weights must be exact integers")
            out[p] = int(v)
        object.__setattr__(self, "_entries", dict(sorted(out.items())))

    def __setattr__(self, name, value):
        raise AttributeError("WeightVector is immutable")

    def __getitem__(self, key) -> int:
        return self._entries[as_point(key)]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        inner = ", ".join(f"({p.x},{p.y}): {v}" for p, v in self._entries.items())
        return f"WeightVector({{{inner}}})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return dict(self.items()) == dict(other.items())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def restrict(self, keys: Iterable) -> "WeightVector":
        return WeightVector({as_point(k): self[k] for k in keys})

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        if set(self) != set(other):
            raise DomainMismatch("weight vectors are on different vertex sets")
        return WeightVector({p: v - other[p] for p, v in self._entries.items()})

    def __add__(self, other: "WeightVector") -> "WeightVector":
        if set(self) != set(other):
            raise DomainMismatch("weight vectors are on different vertex sets")
        return WeightVector({p: v + other[p] for p, v in self._entries.items()})


@dataclass(frozen=True)
class InductionStep:
    vertex: Point2
    coeffs: tuple[tuple[Point2, Fraction], ...]

    def support(self) -> tuple[Point2, ...]:
        return tuple(r for r, c in self.coeffs if c != 0)


class InductionDatum:
    """Base vertices plus an ordered list of convex-combination steps.

    Each step's coefficients are exact rationals in [0,1] summing to 1, refer
    only to base vertices or strictly earlier step vertices, and reproduce
    the step vertex exactly. A step may target an existing vertex (the
    degenerate unit-coefficient step does); induction then requires the
    recomputed value to agree with the one already present.
    """

    __slots__ = ("base", "steps")

    def __init__(self, base: Iterable, steps: Iterable) -> None:
        base_pts = tuple(as_point(p) for p in base)
        if len(set(base_pts)) != len(base_pts):
            raise ValueError("repeated base vertex")
        present = set(base_pts)
        built: list[InductionStep] = []
        for vertex, coeffs in steps:
            v = as_point(vertex)
            pairs = []
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            seen = set()
            for ref, c in items:
                r = as_point(ref)
                if isinstance(c, float):
                    raise ValueError("coefficients must be exact rationals")
                frac = Fraction(c)
                if r in seen:
                    raise ValueError(f"repeated reference {r} in step {v}")
                if r not in present:
                    raise ValueError(f"step {v} refers to absent vertex {r}")
                if not 0 <= frac <= 1:
                    raise ValueError(f"coefficient {frac} outside [0,1]")
                seen.add(r)
                pairs.append((r, frac))
            if sum(c for _, c in pairs) != 1:
                raise ValueError(f"coefficients of step {v} do not sum to 1")
            x = sum(c * r.x for r, c in pairs)
            y = sum(c * r.y for r, c in pairs)
            if (x, y) != (v.x, v.y):
                raise ValueError(f"step {v} is not the stated convex combination")
            built.append(InductionStep(v, tuple(pairs)))
            present.add(v)
        object.__setattr__(self, "base", base_pts)
        object.__setattr__(self, "steps", tuple(built))

    def __setattr__(self, name, value):
        raise AttributeError("InductionDatum is immutable")

    def vertices(self) -> tuple[Point2, ...]:
        return self.base + tuple(s.vertex for s in self.steps)


def induce(b: WeightVector, datum: InductionDatum, signs: Sequence[str]) -> WeightVector:
    """Extend b over the datum's steps by floor ('-') or ceiling ('+')."""
    if set(b) != set(datum.base):
        raise DomainMismatch("weights must be defined exactly on the base")
    if len(signs) != len(datum.steps):
        raise DomainMismatch(f"need {len(datum.steps)} signs, got {len(signs)}")
    if any(s not in (PLUS, MINUS) for s in signs):
        raise DomainMismatch("signs must be '+' or '-'")
    vals: dict[Point2, int] = {p: b[p] for p in datum.base}
    for step, sign in zip(datum.steps, signs):
        combo = sum((c * vals[r] for r, c in step.coeffs), Fraction(0))
        value = floor(combo) if sign == MINUS else ceil(combo)
        if vals.setdefault(step.vertex, value) != value:
            raise DomainMismatch(f"step revisits {step.vertex} with a different value")
    return WeightVector(vals)


def interval_datum(a, b, ordering: Sequence) -> InductionDatum:
    """Steps for the interior points of segment [a,b] in the given order.

    Each step's references are the nearest already-present points on either
    side along the segment.
    """
    a, b = as_point(a), as_point(b)
    interior = segment_lattice_points(a, b)
    pos = {p: i for i, p in enumerate([a] + interior + [b])}
    by_pos = {i: p for p, i in pos.items()}
    listed = [as_point(p) for p in ordering]
    for p in listed:
        if p not in pos or p in (a, b):
            raise BadOrdering(f"{p} is not an interior point of the segment")
    if len(set(listed)) != len(listed) or len(listed) != len(interior):
        raise BadOrdering("ordering must list each interior point exactly once")
    present = [pos[a], pos[b]]
    steps = []
    for p in listed:
        k = pos[p]
        left = max(i for i in present if i < k)
        right = min(i for i in present if i > k)
        t = Fraction(k - left, right - left)
        steps.append((p, [(by_pos[left], 1 - t), (by_pos[right], t)]))
        present.append(k)
    return InductionDatum([a, b], steps)


class Corner(NamedTuple):
    """A lattice corner: apex, the two extreme boundary points, and the
    convex chain of hull points strictly between them."""

    apex: Point2
    start: Point2
    end: Point2
    chain: tuple[Point2, ...]


def _normalized_chain(n: int, q: int) -> tuple[Point2, ...]:
    # Hull chain in the normalized cone from (0,1) to (n,-q); consecutive
    # points obey v_{j+1} = a_j v_j - v_{j-1}.
    if q == 0:
        return ()
    exp = hj_expand(n, q)
    pts = [Point2(0, 1), Point2(1, 0)]
    for j in range(1, exp.r + 1):
        aj = exp.a[j - 1]
        prev, cur = pts[-2], pts[-1]
        pts.append(Point2(aj * cur.x - prev.x, aj * cur.y - prev.y))
    assert pts[-1] == (n, -q)
    return tuple(pts[1:-1])


def corner_chain(apex, start, end) -> tuple[Point2, ...]:
    """Hull chain between the two legs of a corner, in original coordinates."""
    n, q, umap = normalize_corner((apex, start, end))
    inv = umap.inverse()
    return tuple(inv.apply(p) for p in _normalized_chain(n, q))


def standard_corner(n: int, q: int) -> Corner:
    """The normalized model corner with apex at the origin."""
    return Corner(Point2(0, 0), Point2(0, 1), Point2(n, -q), _normalized_chain(n, q))


def triangle_induce(b_m1: int, b_0: int, b_rp1: int, corner: Corner) -> list[int]:
    """Chain weights from the three corner weights by the floor rule.

    b_j = floor(((i_{j-1} - i_j - 1) b_apex + i_j b_{j-1} + b_end) / i_{j-1})
    along the hull chain, always rounding down.
    """
    n, q, _ = normalize_corner((corner.apex, corner.start, corner.end))
    if tuple(corner.chain) != corner_chain(corner.apex, corner.start, corner.end):
        raise ChainMismatch("corner chain is not the lattice hull chain")
    if q == 0:
        return []
    i = hj_expand(n, q).i_seq
    out = []
    prev = b_0
    for j in range(1, len(i) - 1):
        prev = ((i[j - 1] - i[j] - 1) * b_m1 + i[j] * prev + b_rp1) // i[j - 1]
        out.append(prev)
    return out


def triangle_datum(corner: Corner) -> InductionDatum:
    """The corner's chain as explicit convex-combination steps."""
    n, q, _ = normalize_corner((corner.apex, corner.start, corner.end))
    if tuple(corner.chain) != corner_chain(corner.apex, corner.start, corner.end):
        raise ChainMismatch("corner chain is not the lattice hull chain")
    if q == 0:
        return InductionDatum([corner.apex, corner.start, corner.end], [])
    i = hj_expand(n, q).i_seq
    steps = []
    prev = corner.start
    for j, v in enumerate(corner.chain, start=1):
        den = i[j - 1]
        coeffs = [
            (corner.apex, Fraction(i[j - 1] - i[j] - 1, den)),
            (prev, Fraction(i[j], den)),
            (corner.end, Fraction(1, den)),
        ]
        steps.append((v, [(r, c) for r, c in coeffs if c != 0]))
        prev = v
    return InductionDatum([corner.apex, corner.start, corner.end], steps)


def sign_vector(b: WeightVector, m) -> dict[Point2, str]:
    """Per-vertex sign of m(v) + b_v."""
    f = _functional(m)
    return {p: sign_of(f.value(p) + v) for p, v in b.items()}


def check_sign_membership(b: WeightVector, datum: InductionDatum, m) -> bool:
    """Each step's sign must occur among its nonzero-coefficient references."""
    f = _functional(m)
    for step in datum.steps:
        s = sign_of(f.value(step.vertex) + b[step.vertex])
        support = {sign_of(f.value(r) + b[r]) for r in step.support()}
        if s not in support:
            return False
    return True


def difference_is_induced(b1: WeightVector, b2: WeightVector, datum: InductionDatum):
    """Sign sequence witnessing that b1 - b2 is induced from the base
    difference, preferring '-' when floor and ceiling agree."""
    verts = set(datum.vertices())
    if set(b1) != verts or set(b2) != verts:
        raise DomainMismatch("weight vectors do not cover the datum's vertices")
    vals: dict[Point2, int] = {p: b1[p] - b2[p] for p in datum.base}
    signs = []
    for step in datum.steps:
        combo = sum((c * vals[r] for r, c in step.coeffs), Fraction(0))
        target = b1[step.vertex] - b2[step.vertex]
        if target == floor(combo):
            signs.append(MINUS)
        elif target == ceil(combo):
            signs.append(PLUS)
        else:
            raise NotInduced(f"difference at {step.vertex} is neither floor nor ceiling")
        vals[step.vertex] = target
    return tuple(signs)


def interval_pattern_holds(b: WeightVector, m) -> bool:
    """At most one sign change along a collinear chain of weighted points."""
    pts = sorted(b)
    if len(pts) > 2 and any(cross(pts[0], pts[1], p) != 0 for p in pts[2:]):
        raise DomainMismatch("interval weights must sit on one line")
    f = _functional(m)
    signs = [sign_of(f.value(p) + b[p]) for p in pts]
    changes = sum(1 for x, y in zip(signs, signs[1:]) if x != y)
    return changes <= 1


def _sign_blocks(signs: Sequence[str]) -> tuple[str, ...]:
    out: list[str] = []
    for s in signs:
        if not out or out[-1] != s:
            out.append(s)
    return tuple(out)


_CHAIN_BLOCKS_AFTER = {
    MINUS: {(), (PLUS,), (MINUS,), (PLUS, MINUS), (MINUS, PLUS), (PLUS, MINUS, PLUS)},
    PLUS: {(), (MINUS,), (PLUS,), (MINUS, PLUS), (PLUS, MINUS), (MINUS, PLUS, MINUS)},
}


def triangle_pattern_holds(c: WeightVector, corner: Corner, m) -> bool:
    """Signs along (apex, start, chain..., end) match one of the two corner
    templates: (-, +^p, -^q, +^r) or (+, -^p, +^q, -^r)."""
    order = [corner.apex, corner.start, *corner.chain, corner.end]
    f = _functional(m)
    signs = [sign_of(f.value(p) + c[p]) for p in order]
    return _sign_blocks(signs[1:]) in _CHAIN_BLOCKS_AFTER[signs[0]]


def truncation_consistent(corner: Corner, b_m1: int, b_0: int, b_rp1: int) -> bool:
    """Chopping the corner at any chain point reproduces the prefix weights."""
    full = triangle_induce(b_m1, b_0, b_rp1, corner)
    seq = [b_0, *full, b_rp1]
    ends = [*corner.chain, corner.end]
    for l in range(1, len(ends) + 1):
        sub = Corner(corner.apex, corner.start, ends[l - 1], tuple(corner.chain[: l - 1]))
        if triangle_induce(b_m1, b_0, seq[l], sub) != full[: l - 1]:
            return False
    return True


def steps_json(datum: InductionDatum, signs: Sequence[str]) -> list[dict]:
    """Steps in wire form: vertex, rational coefficients, and sign."""
    if len(signs) != len(datum.steps):
        raise DomainMismatch(f"need {len(datum.steps)} signs, got {len(signs)}")
    return [
        {
            "vertex": [step.vertex.x, step.vertex.y],
            "coeffs": [
                {"vertex": [r.x, r.y], "num": c.numerator, "den": c.denominator}
                for r, c in step.coeffs
            ],
            "sign": sign,
        }
        for step, sign in zip(datum.steps, signs)
    ]
