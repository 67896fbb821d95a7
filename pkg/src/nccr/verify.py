"""Vanishing checks and endomorphism certificates for weight collections.

A weight vector b assigns an integer to every vertex of a triangulated
polygon.  Each integer affine functional m splits the vertices by the sign
of m(v) + b_v, and the negative side spans an induced subcomplex of the
triangulation.  Pairs of weight vectors interact through the subcomplexes
of their difference: all of them must be empty or contractible.

Sign vectors are enumerated two ways.  Box mode tries every integer
functional in a cube, so each reported pattern carries its witness, but
completeness stops at the radius.  Chamber mode is exact over the reals:
the (m1, m2) plane is cut into cells by the lines where two vertex
thresholds tie, and sliding m3 through a representative's threshold order
emits the patterns.  A chamber sweep covers every pattern any real
functional produces, which can include patterns with no integer witness,
so a pattern may refute a certificate only after an exact integer
feasibility check confirms it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Mapping, NamedTuple, Optional

import numpy as np

from .lattice_geometry import (
    CollinearInput,
    Functional3,
    as_point,
    class_character,
    convex_hull,
    group_weights,
    normalized_volume,
)
from .induction import (
    MINUS,
    PLUS,
    DomainMismatch,
    InductionDatum,
    WeightVector,
    induce,
)
from .triangulate import SeedCollection, _edge_combination


class ExplosionGuard(ValueError):
    """Raised when a sign-assignment enumeration exceeds its branch limit."""


@dataclass(frozen=True)
class InducedSubcomplex:
    """Subcomplex induced on a vertex subset of a triangulation.

    Simplices are implied by the ambient triangulation: an edge or triangle
    belongs to the subcomplex exactly when all its vertices are active.
    """

    active: frozenset
    edges: tuple
    faces: tuple


@dataclass(frozen=True)
class ChamberRepresentative:
    """One sampled direction of the threshold arrangement.

    direction is an exact rational (m1, m2); nudge, when present, pushes it
    infinitesimally off the arrangement lines.  order lists the vertices
    grouped by tied threshold, largest first, and sweep records the sign
    strings produced as m3 descends through the groups.
    """

    direction: tuple
    nudge: Optional[tuple]
    order: tuple
    sweep: tuple


@dataclass(frozen=True)
class ChamberCover:
    """Representatives covering every cell of the threshold arrangement."""

    vertices: tuple
    representatives: tuple

    def sign_vectors(self) -> set:
        return {s for rep in self.representatives for s in rep.sweep}


@dataclass(frozen=True)
class Failure:
    """One failing sign pattern of one ordered pair."""

    b: WeightVector
    bprime: WeightVector
    signs: str
    witness: Optional[Functional3]
    betti: tuple


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a pairwise vanishing sweep.

    pruned counts chamber patterns that failed contractibility but were
    proven integer-unrealizable; they never reach the failure list.
    """

    mode: str
    pairs_checked: int
    sign_vectors_checked: int
    failures: tuple
    verdict: str
    pruned: int = 0


class CmCheck(NamedTuple):
    ok: bool
    witness: Optional[Functional3]


@dataclass(frozen=True)
class NCCRCertificate:
    """Boundary condition plus class count against the volume."""

    cm_ok: bool
    class_count: int
    volume: int
    verdict: bool


def _as_functional(m) -> Functional3:
    if isinstance(m, Functional3):
        return m
    return Functional3(int(m[0]), int(m[1]), int(m[2]))


def _members(collection) -> tuple:
    if isinstance(collection, SeedCollection):
        return tuple(collection.members)
    return tuple(collection)


def v_complex(triangles, b, m) -> InducedSubcomplex:
    """Subcomplex on the vertices where m(v) + b_v is negative."""
    f = _as_functional(m)
    domain = {as_point(p) for p in b}
    tris = tuple(tuple(as_point(p) for p in t) for t in triangles)
    for t in tris:
        for p in t:
            if p not in domain:
                raise DomainMismatch(f"triangle vertex {p} carries no weight")
    active = frozenset(p for p in domain if f.value(p) + b[p] < 0)
    edges = set()
    faces = set()
    for t in tris:
        if all(p in active for p in t):
            faces.add(tuple(sorted(t)))
        for u, v in combinations(t, 2):
            if u in active and v in active:
                edges.add((u, v) if u < v else (v, u))
    return InducedSubcomplex(active, tuple(sorted(edges)), tuple(sorted(faces)))


def reduced_betti(sub: InducedSubcomplex) -> tuple:
    """Reduced Betti numbers (b_-1, b_0, b_1); the empty complex gives (1, 0, 0).

    Planar complexes have no 2-cycles, so b_1 is components minus the Euler
    characteristic.
    """
    if not sub.active:
        return (1, 0, 0)
    parent = {v: v for v in sub.active}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in sub.edges:
        parent[find(u)] = find(v)
    comps = len({find(v) for v in sub.active})
    chi = len(sub.active) - len(sub.edges) + len(sub.faces)
    return (0, comps - 1, comps - chi)


def is_empty_or_contractible(sub: InducedSubcomplex) -> bool:
    return reduced_betti(sub) in ((1, 0, 0), (0, 0, 0))


class _MaskComplex:
    """Triangulation indexed for mask-addressed Betti queries."""

    def __init__(self, triangles):
        pts = sorted({as_point(p) for t in triangles for p in t})
        self.verts = tuple(pts)
        self.index = {p: i for i, p in enumerate(pts)}
        edges = set()
        faces = set()
        for t in triangles:
            tri = sorted(self.index[as_point(p)] for p in t)
            faces.add(tuple(tri))
            edges.update(combinations(tri, 2))
        self.edges = sorted(edges)
        self.faces = sorted(faces)
        self._cache = {}

    def betti(self, mask: int) -> tuple:
        got = self._cache.get(mask)
        if got is not None:
            return got
        if mask == 0:
            out = (1, 0, 0)
        else:
            verts = [i for i in range(len(self.verts)) if mask >> i & 1]
            parent = list(range(len(self.verts)))

            def find(v):
                while parent[v] != v:
                    parent[v] = parent[parent[v]]
                    v = parent[v]
                return v

            ne = 0
            for u, v in self.edges:
                if mask >> u & 1 and mask >> v & 1:
                    ne += 1
                    parent[find(u)] = find(v)
            nf = sum(
                1
                for a, b, c in self.faces
                if mask >> a & 1 and mask >> b & 1 and mask >> c & 1
            )
            comps = len({find(v) for v in verts})
            chi = len(verts) - ne + nf
            out = (0, comps - 1, comps - chi)
        self._cache[mask] = out
        return out


def _tie_lines(points, c) -> list:
    """Lines in the (m1, m2) plane where two vertex thresholds tie."""
    out = {}
    for i, j in combinations(range(len(points)), 2):
        a = points[i].x - points[j].x
        b = points[i].y - points[j].y
        r = c[j] - c[i]
        g = gcd(gcd(abs(a), abs(b)), abs(r))
        a, b, r = a // g, b // g, r // g
        if a < 0 or (a == 0 and b < 0):
            a, b, r = -a, -b, -r
        out[(a, b, r)] = None
    return list(out)


def _cross_point(l1, l2):
    """Homogeneous integer intersection (nx, ny, dz) with dz > 0, or None."""
    a1, b1, r1 = l1
    a2, b2, r2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    nx = r1 * b2 - r2 * b1
    ny = a1 * r2 - a2 * r1
    if det < 0:
        nx, ny, det = -nx, -ny, -det
    g = gcd(gcd(abs(nx), abs(ny)), det)
    return (nx // g, ny // g, det // g)


def _point_on(base, d, t: Fraction):
    """Homogeneous point base + t*d on a line, with positive denominator."""
    bx, by, bz = base
    tn, td = t.numerator, t.denominator
    nx = bx * td + tn * d[0] * bz
    ny = by * td + tn * d[1] * bz
    dz = bz * td
    g = gcd(gcd(abs(nx), abs(ny)), dz)
    return (nx // g, ny // g, dz // g)


def _chamber_reps(points, c) -> list:
    """Integer-homogeneous sweep representatives covering every cell.

    Each entry is ((nx, ny, dz), (ex, ey)): the rational direction
    (nx/dz, ny/dz) plus an infinitesimal nudge, (0, 0) meaning none.  The
    origin covers the lineless case, crossings cover arrangement vertices,
    points between crossings cover the 1-cells, and nudging those off their
    line reaches every 2-cell adjacent to it.
    """
    lines = _tie_lines(points, c)
    reps = {((0, 0, 1), (0, 0))}
    for l1, l2 in combinations(lines, 2):
        p = _cross_point(l1, l2)
        if p is not None:
            reps.add((p, (0, 0)))
    for ln in lines:
        a, b, _ = ln
        g = gcd(abs(a), abs(b))
        d = (-b // g, a // g)
        base = (ln[2], 0, a) if a > 0 else (0, ln[2], b)
        dd = d[0] * d[0] + d[1] * d[1]
        svals = set()
        for other in lines:
            if other is ln:
                continue
            p = _cross_point(ln, other)
            if p is not None:
                svals.add(Fraction(d[0] * p[0] + d[1] * p[1], p[2]))
        sbase = Fraction(d[0] * base[0] + d[1] * base[1], base[2])
        ordered = sorted(svals)
        if ordered:
            spots = [ordered[0] - dd]
            spots.extend(
                (u + v) / 2 for u, v in zip(ordered, ordered[1:])
            )
            spots.append(ordered[-1] + dd)
        else:
            spots = [sbase]
        for s in spots:
            pt = _point_on(base, d, (s - sbase) / dd)
            for eps in ((0, 0), (a, b), (-a, -b)):
                reps.add((pt, eps))
    return sorted(reps)


def _masks_from_key(K) -> set:
    """Prefix-group masks of each row of a descending threshold sort."""
    k = K.shape[1]
    order = np.argsort(-K, axis=1, kind="stable")
    sk = np.take_along_axis(K, order, axis=1)
    bits = np.int64(1) << order.astype(np.int64)
    pref = np.bitwise_or.accumulate(bits, axis=1)
    out = {0, (1 << k) - 1}
    if k > 1:
        bnd = sk[:, :-1] != sk[:, 1:]
        out.update(int(x) for x in pref[:, :-1][bnd])
    return out


def _masks_python(points, c, reps) -> set:
    """Reference sweep in exact integer arithmetic, one row at a time."""
    k = len(points)
    out = {0, (1 << k) - 1}
    for (nx, ny, dz), (ex, ey) in reps:
        taus = sorted(
            (
                (-(nx * p.x + ny * p.y + dz * cv), -(ex * p.x + ey * p.y), i)
                for i, (p, cv) in enumerate(zip(points, c))
            ),
            key=lambda t: (t[0], t[1]),
            reverse=True,
        )
        mask = 0
        for j in range(k - 1):
            mask |= 1 << taus[j][2]
            if taus[j][:2] != taus[j + 1][:2]:
                out.add(mask)
    return out


@lru_cache(maxsize=None)
def chamber_masks(points: tuple, c: tuple) -> frozenset:
    """Sign masks (bit i = minus at points[i]) the chamber sweep emits.

    A superset of every mask an integer functional realizes; realizability
    of individual masks is a separate question.
    """
    reps = _chamber_reps(points, c)
    maxdir = max(abs(x) for rep in reps for x in rep[0])
    maxn = max(abs(x) for rep in reps for x in rep[1])
    span = max(max(abs(p.x), abs(p.y)) for p in points)
    cmax = max((abs(x) for x in c), default=0)
    mbound = 3 * maxdir * max(span, cmax, 1)
    ebound = 2 * maxn * max(span, 1)
    big = 2 * ebound + 1
    if mbound * big + ebound < 1 << 62:
        dirs = np.array([r[0] for r in reps], dtype=np.int64)
        nudges = np.array([r[1] for r in reps], dtype=np.int64)
        ph = np.array([[p.x, p.y, cv] for p, cv in zip(points, c)], dtype=np.int64)
        main = -(dirs @ ph.T)
        eps = -(nudges @ ph[:, :2].T)
        return frozenset(_masks_from_key(main * np.int64(big) + eps))
    return frozenset(_masks_python(points, c, reps))


def box_masks(points, c, radius: int) -> dict:
    """Mask to lexicographically first witness, over a cube of functionals."""
    rng = np.arange(-radius, radius + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(rng, rng, rng, indexing="ij"), axis=-1).reshape(-1, 3)
    ph = np.array([[p.x, p.y, 1] for p in points], dtype=np.int64)
    vals = grid @ ph.T + np.array(c, dtype=np.int64)[None, :]
    weights = np.int64(1) << np.arange(len(points), dtype=np.int64)
    masks = (vals < 0).astype(np.int64) @ weights
    uniq, idx = np.unique(masks, return_index=True)
    return {int(u): Functional3(*map(int, grid[i])) for u, i in zip(uniq, idx)}


def chamber_cover(vertices, b) -> ChamberCover:
    """Exact cell decomposition of functional space for one weight vector.

    Sign strings follow the vertex order given here.  Every rational
    direction shares a cell, hence a threshold order, with some listed
    representative, so the union of sweeps contains every sign vector a
    real functional realizes.
    """
    pts = tuple(as_point(p) for p in vertices)
    if isinstance(b, Mapping):
        c = tuple(int(b[p]) for p in pts)
    else:
        c = tuple(int(x) for x in b)
        if len(c) != len(pts):
            raise DomainMismatch("one weight per vertex")
    reps = []
    for (nx, ny, dz), (ex, ey) in _chamber_reps(pts, c):
        taus = sorted(
            (
                ((Fraction(-(nx * p.x + ny * p.y + dz * cv), dz), -(ex * p.x + ey * p.y)), p)
                for p, cv in zip(pts, c)
            ),
            key=lambda t: t[0],
            reverse=True,
        )
        pos = {p: i for i, p in enumerate(pts)}
        cur = ["+"] * len(pts)
        groups = []
        sweep = ["".join(cur)]
        i = 0
        while i < len(taus):
            j = i
            while j < len(taus) and taus[j][0] == taus[i][0]:
                j += 1
            grp = tuple(t[1] for t in taus[i:j])
            groups.append(grp)
            for p in grp:
                cur[pos[p]] = "-"
            sweep.append("".join(cur))
            i = j
        nudge = (ex, ey) if (ex, ey) != (0, 0) else None
        reps.append(
            ChamberRepresentative(
                (Fraction(nx, dz), Fraction(ny, dz)), nudge, tuple(groups), tuple(sweep)
            )
        )
    return ChamberCover(pts, tuple(reps))


def _ext_gcd(a: int, b: int) -> tuple:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _grid_hit(items, radius: int):
    """First feasible integer point of q.y <= r by |x| then nearest y."""
    for x in sorted(range(-radius, radius + 1), key=lambda v: (abs(v), v)):
        ylo, yhi = -radius, radius
        ok = True
        for (qx, qy), r in items:
            s = r - qx * x
            if qy == 0:
                if s < 0:
                    ok = False
                    break
            elif qy > 0:
                yhi = min(yhi, s // qy)
            else:
                ylo = max(ylo, -(s // -qy))
            if ylo > yhi:
                ok = False
                break
        if ok and ylo <= yhi:
            y = 0 if ylo <= 0 <= yhi else (ylo if ylo > 0 else yhi)
            return (x, y)
    return None


def _with_m3(points, c, act, inact, y) -> Functional3:
    lows = [-(y[0] * points[i].x + y[1] * points[i].y) - c[i] for i in inact]
    ups = [-(y[0] * points[i].x + y[1] * points[i].y) - c[i] - 1 for i in act]
    m3 = max(lows) if lows else min(ups)
    m = Functional3(y[0], y[1], m3)
    assert all(m.value(points[i]) + c[i] < 0 for i in act)
    assert all(m.value(points[i]) + c[i] >= 0 for i in inact)
    return m


@lru_cache(maxsize=None)
def realize_sign_mask(points: tuple, c: tuple, mask: int, cap: int = 4096):
    """Exact integer witness search for one sign pattern.

    Bit i of mask requests a negative value at points[i].  Returns
    ("yes", m), ("no", None), or ("unknown", None); "no" is only returned
    after a provably complete search, so the cap turns oversized instances
    into "unknown" rather than unsound answers.

    Eliminating m3 (its coefficient is 1) leaves a two-variable integer
    system q.y <= r.  Opposed bounds on a common direction settle most
    infeasible patterns; the rest is a scan of the cube whose radius
    2*max|q|*max|r| + 2*max|q| + 1 suffices because any solution walks back
    into it along primitive recession directions of the constraint cone.
    """
    k = len(points)
    act = [i for i in range(k) if mask >> i & 1]
    inact = [i for i in range(k) if not mask >> i & 1]
    if not act:
        return "yes", Functional3(0, 0, max(-c[i] for i in inact))
    if not inact:
        return "yes", Functional3(0, 0, min(-c[i] - 1 for i in act))
    cons = {}
    for u in inact:
        for v in act:
            q = (points[v].x - points[u].x, points[v].y - points[u].y)
            r = c[u] - c[v] - 1
            if q == (0, 0):
                if r < 0:
                    return "no", None
                continue
            cons[q] = min(cons.get(q, r), r)
    if not cons:
        return "no", None
    bounds = {}
    for (qx, qy), r in cons.items():
        g = gcd(abs(qx), abs(qy))
        dx, dy = qx // g, qy // g
        lam = g
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy, lam = -dx, -dy, -g
        lo, hi = bounds.get((dx, dy), (None, None))
        if lam > 0:
            h = r // lam
            hi = h if hi is None else min(hi, h)
        else:
            l2 = -(r // -lam)
            lo = l2 if lo is None else max(lo, l2)
        bounds[(dx, dy)] = (lo, hi)
    for lo, hi in bounds.values():
        if lo is not None and hi is not None and lo > hi:
            return "no", None
    if len(bounds) == 1:
        ((dx, dy),) = bounds
        lo, hi = bounds[(dx, dy)]
        t = lo if lo is not None else (hi if hi is not None else 0)
        _, xg, yg = _ext_gcd(dx, dy)
        return "yes", _with_m3(points, c, act, inact, (xg * t, yg * t))
    items = sorted(cons.items())
    delta = max(max(abs(qx), abs(qy)) for qx, qy in cons)
    dmax = max(1, max(abs(r) for r in cons.values()))
    complete = 2 * delta * dmax + 2 * delta + 1
    hit = _grid_hit(items, min(complete, cap))
    if hit is not None:
        return "yes", _with_m3(points, c, act, inact, hit)
    if complete <= cap:
        return "no", None
    return "unknown", None


def _mask_string(mask: int, k: int) -> str:
    return "".join("-" if mask >> i & 1 else "+" for i in range(k))


def ext_vanishing(
    triangles,
    collection,
    mode: str = "chamber",
    box_radius: int = 8,
    realize_cap: int = 4096,
) -> VerificationReport:
    """Pairwise vanishing sweep of a weight collection on a triangulation.

    Every ordered pair's difference is swept for sign patterns whose
    subcomplex is neither empty nor contractible.  Chamber mode prunes
    patterns no integer functional realizes; box mode only meets witnessed
    patterns.  The verdict is "refuted" when a witnessed failure survives,
    "inconclusive" when some failing pattern outruns the realizability cap,
    and "certified" otherwise.
    """
    if mode not in ("chamber", "box"):
        raise ValueError(f"unknown mode {mode!r}")
    cx = _MaskComplex(triangles)
    pts = cx.verts
    members = _members(collection)
    rows = []
    for w in members:
        try:
            rows.append(tuple(w[p] for p in pts))
        except KeyError as missing:
            raise DomainMismatch(f"weight vector misses vertex {missing}") from None
    failures = []
    checked = 0
    pruned = 0
    unresolved = 0
    for bi, brow in enumerate(rows):
        for bj, prow in enumerate(rows):
            c = tuple(p - q for p, q in zip(prow, brow))
            witnesses = box_masks(pts, c, box_radius) if mode == "box" else None
            masks = sorted(witnesses) if mode == "box" else sorted(chamber_masks(pts, c))
            checked += len(masks)
            for mask in masks:
                bb = cx.betti(mask)
                if bb in ((1, 0, 0), (0, 0, 0)):
                    continue
                signs = _mask_string(mask, len(pts))
                if mode == "box":
                    failures.append(
                        Failure(members[bi], members[bj], signs, witnesses[mask], bb[1:])
                    )
                    continue
                status, w = realize_sign_mask(pts, c, mask, realize_cap)
                if status == "no":
                    pruned += 1
                elif status == "yes":
                    failures.append(Failure(members[bi], members[bj], signs, w, bb[1:]))
                else:
                    unresolved += 1
                    failures.append(Failure(members[bi], members[bj], signs, None, bb[1:]))
    if any(f.witness is not None for f in failures):
        verdict = "refuted"
    elif unresolved:
        verdict = "inconclusive"
    else:
        verdict = "certified"
    return VerificationReport(mode, len(rows) ** 2, checked, tuple(failures), verdict, pruned)


def report_json(report: VerificationReport) -> dict:
    """Plain-data form of a report; weights are listed over sorted vertices."""
    return {
        "mode": report.mode,
        "pairs": report.pairs_checked,
        "vectors": report.sign_vectors_checked,
        "failures": [
            {
                "b": [f.b[p] for p in sorted(f.b)],
                "bprime": [f.bprime[p] for p in sorted(f.bprime)],
                "signs": f.signs,
                "witness": list(f.witness) if f.witness is not None else None,
                "betti": list(f.betti),
            }
            for f in report.failures
        ],
        "verdict": report.verdict,
    }


def cm_check(polygon, b) -> CmCheck:
    """At most one sign rise and one fall around the boundary, for every m.

    Sweeps the chamber decomposition of the corner thresholds.  A pattern
    with more transitions counts only when some integer functional realizes
    it; the first realizable one is returned as witness.  A pattern the
    realizability cap cannot settle fails the check without a witness.
    """
    corners = polygon.vertices
    pts = tuple(sorted(corners))
    c = tuple(int(b[p]) for p in pts)
    pos = {p: i for i, p in enumerate(pts)}
    n = len(corners)
    undecided = False
    for mask in sorted(chamber_masks(pts, c)):
        signs = [mask >> pos[v] & 1 for v in corners]
        changes = sum(signs[i] != signs[(i + 1) % n] for i in range(n))
        if changes <= 2:
            continue
        status, w = realize_sign_mask(pts, c, mask)
        if status == "yes":
            return CmCheck(False, w)
        if status == "unknown":
            undecided = True
    return CmCheck(not undecided, None)


def endo_cm_check(polygon, collection) -> bool:
    """cm_check of every ordered difference within the collection."""
    members = _members(collection)
    for b in members:
        for bp in members:
            diff = {v: bp[v] - b[v] for v in polygon.vertices}
            if not cm_check(polygon, diff).ok:
                return False
    return True


def count_classes(polygon, collection) -> int:
    """Distinct module classes of the collection on the polygon's corners."""
    grp = group_weights(polygon)
    return len(
        {class_character([w[v] for v in polygon.vertices], grp) for w in _members(collection)}
    )


def nccr_certificate(polygon, collection) -> NCCRCertificate:
    """Certificate: boundary condition and class count equal to the volume."""
    members = _members(collection)
    cm = endo_cm_check(polygon, members)
    n = count_classes(polygon, members)
    vol = normalized_volume(polygon)
    return NCCRCertificate(cm, n, vol, cm and n == vol)


def module_points(b, box_radius: int) -> frozenset:
    """Integer functionals in the cube that are nonnegative against b."""
    pts = sorted(as_point(p) for p in b)
    vals = {p: int(b[p]) for p in pts}
    rng = range(-box_radius, box_radius + 1)
    out = []
    for m1 in rng:
        for m2 in rng:
            for m3 in rng:
                if all(m1 * p.x + m2 * p.y + m3 + vals[p] >= 0 for p in pts):
                    out.append(Functional3(m1, m2, m3))
    return frozenset(out)


def _cone_signature(keys) -> tuple:
    if len(keys) < 3:
        return tuple(sorted(keys))
    try:
        return convex_hull(keys).vertices
    except CollinearInput:
        ks = sorted(keys)
        return (ks[0], ks[-1])


def modules_equal(b1, b2, box_radius: int = 8) -> bool:
    """Box agreement plus exact comparison of the recession cones.

    Disagreement in either part is decisive; agreement certifies equality
    only as far as the box reaches, since the defining key sets may differ.
    """
    if module_points(b1, box_radius) != module_points(b2, box_radius):
        return False
    return _cone_signature(tuple(b1)) == _cone_signature(tuple(b2))


def rectangle_condition(seeds: SeedCollection) -> bool:
    """No member difference sweeps an alternating corner pattern.

    The two cyclically alternating sign patterns on the four frame corners
    are forbidden; a swept hit counts only when an integer functional
    realizes it, and an undecided hit counts against the condition.
    """
    corners = tuple(seeds.base_vertices)
    if len(corners) != 4:
        raise DomainMismatch("the condition concerns a four-corner frame")
    pts = tuple(sorted(corners))
    pos = {p: i for i, p in enumerate(pts)}
    alternating = (
        1 << pos[corners[0]] | 1 << pos[corners[2]],
        1 << pos[corners[1]] | 1 << pos[corners[3]],
    )
    members = tuple(seeds.members)
    for b in members:
        for bp in members:
            c = tuple(bp[p] - b[p] for p in pts)
            masks = chamber_masks(pts, c)
            for bad in alternating:
                if bad in masks and realize_sign_mask(pts, c, bad)[0] != "no":
                    return False
    return True


def constant_sign_path_check(polygon, triangles, datum: InductionDatum, branch_limit: int = 200000) -> bool:
    """Boundary-anchored sign components for every admissible assignment.

    Admissible assignments give each step vertex a sign occurring in its
    support while the polygon corners read cyclically as one plus block
    followed by one minus block, both nonempty.  The check passes when in
    every such assignment each vertex reaches the polygon boundary through
    vertices of its own sign.
    """
    corners = polygon.vertices
    if set(datum.base) != set(corners):
        raise DomainMismatch("datum base must be the polygon corners")
    verts = {as_point(p) for t in triangles for p in t}
    known = set(datum.base) | {s.vertex for s in datum.steps}
    missing = verts - known
    if missing:
        raise DomainMismatch(f"no step for triangulation vertex {sorted(missing)[0]}")
    adj = {v: set() for v in verts}
    for t in triangles:
        tp = [as_point(p) for p in t]
        for u, v in combinations(tp, 2):
            adj[u].add(v)
            adj[v].add(u)
    boundary = {v for v in verts if not polygon.contains_interior(v)}
    n = len(corners)
    patterns = {
        frozenset(corners[(start + i) % n] for i in range(run))
        for start in range(n)
        for run in range(1, n)
    }
    budget = branch_limit
    for plus_set in sorted(patterns, key=sorted):
        seed = {v: PLUS if v in plus_set else MINUS for v in corners}
        stack = [(0, seed)]
        while stack:
            i, sigma = stack.pop()
            if i == len(datum.steps):
                if not _anchored(sigma, verts, adj, boundary):
                    return False
                continue
            step = datum.steps[i]
            for s in sorted({sigma[r] for r in step.support()}):
                budget -= 1
                if budget < 0:
                    raise ExplosionGuard("sign assignment enumeration exceeded the branch limit")
                nxt = dict(sigma)
                nxt[step.vertex] = s
                stack.append((i + 1, nxt))
    return True


def _anchored(sigma, verts, adj, boundary) -> bool:
    for v in verts:
        if v in boundary:
            continue
        stack = [v]
        seen = {v}
        hit = False
        while stack:
            u = stack.pop()
            if u in boundary:
                hit = True
                break
            for w in adj[u]:
                if w not in seen and sigma[w] == sigma[v]:
                    seen.add(w)
                    stack.append(w)
        if not hit:
            return False
    return True


def projection_preserves_cm(polygon, b, cut) -> bool:
    """A corner cut, induced either way, keeps the boundary condition.

    The cut removes one corner; the chain endpoints receive weights induced
    along the edges they subdivide, uniformly ceiling then uniformly floor,
    and the removed corner is projected out.  Requires b to pass cm_check
    on the polygon.
    """
    if not cm_check(polygon, b).ok:
        raise ValueError("weights fail the boundary condition on the polygon")
    removed, chain = (cut.removed, cut.chain) if hasattr(cut, "removed") else cut
    apex = as_point(removed)
    if apex not in polygon.vertices:
        raise ValueError(f"{apex} is not a corner of the polygon")
    ends = [as_point(chain[0]), as_point(chain[-1])]
    keep = [v for v in polygon.vertices if v != apex]
    smaller = convex_hull(keep + [e for e in ends if e not in keep])
    steps = [(e, _edge_combination(polygon, e)) for e in ends if e not in keep]
    datum = InductionDatum(polygon.vertices, steps)
    base = WeightVector({v: b[v] for v in polygon.vertices})
    for sign in (PLUS, MINUS):
        vals = induce(base, datum, (sign,) * len(steps))
        if not cm_check(smaller, {v: vals[v] for v in smaller.vertices}).ok:
            return False
    return True
