"""Hirzebruch-Jung continued fraction algebra.

Expansions n/q = [a_1, ..., a_r] with a_j >= 2, the two-index solution tables
q(s,t) of the associated three-term recursion, greedy digit expansions with
respect to the i-sequence, and the closed-form boundary values built from
them. Everything is exact integer arithmetic; `identity_violations` sweeps
every identity over a range of (n, q) pairs with numpy doing the bulk work.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np


class BadArguments(ValueError):
    """Expansion arguments outside n > q > 0 coprime."""


class OutOfRange(ValueError):
    """Digit expansion input outside [0, n)."""


@dataclass(frozen=True)
class HJExpansion:
    n: int
    q: int
    a: tuple[int, ...]
    i_seq: tuple[int, ...]

    def __post_init__(self) -> None:
        n, q, a, i_seq = self.n, self.q, self.a, self.i_seq
        if not (n > q > 0 and gcd(n, q) == 1):
            raise BadArguments(f"need n > q > 0 coprime, got ({n}, {q})")
        r = len(a)
        if any(x < 2 for x in a):
            raise BadArguments("all partial quotients must be >= 2")
        if len(i_seq) != r + 2 or i_seq[0] != n or i_seq[1] != q or i_seq[-2] != 1 or i_seq[-1] != 0:
            raise BadArguments("i-sequence endpoints are wrong")
        for j in range(1, r + 1):
            if i_seq[j - 1] != a[j - 1] * i_seq[j] - i_seq[j + 1]:
                raise BadArguments("i-sequence recursion violated")
        for j in range(1, r):
            if not (0 < i_seq[j + 1] < i_seq[j]):
                raise BadArguments("i-sequence must strictly descend to zero")
        value = Fraction(a[-1])
        for x in reversed(a[:-1]):
            value = x - 1 / value
        if value != Fraction(n, q):
            raise BadArguments("continued fraction does not evaluate to n/q")

    @property
    def r(self) -> int:
        return len(self.a)


def hj_expand(n: int, q: int) -> HJExpansion:
    """Negative-regular expansion of n/q by the Euclidean-style descent.

    i_0 = n, i_1 = q, a_j = ceil(i_{j-1}/i_j) and i_{j+1} = a_j i_j - i_{j-1}
    until the sequence hits zero.
    """
    if not (isinstance(n, int) and isinstance(q, int) and n > q > 0 and gcd(n, q) == 1):
        raise BadArguments(f"need n > q > 0 coprime, got ({n!r}, {q!r})")
    i_seq = [n, q]
    a: list[int] = []
    while i_seq[-1] != 0:
        prev, cur = i_seq[-2], i_seq[-1]
        step = -(-prev // cur)
        a.append(step)
        i_seq.append(step * cur - prev)
    return HJExpansion(n=n, q=q, a=tuple(a), i_seq=tuple(i_seq))


class QTable:
    """Solutions q(s,t) of the three-term recursion, zero-extended.

    q(s,s) = 0, q(s,s+1) = 1, and q(s,t+1) = a_t q(s,t) - q(s,t-1) with
    a_t = 0 outside 1..r, so both indices range over all of Z. Entries are
    memoized; the table never mutates an existing entry.
    """

    def __init__(self, a: tuple[int, ...]) -> None:
        self.a = tuple(a)
        self.r = len(self.a)
        self._memo: dict[tuple[int, int], int] = {}

    def coeff(self, t: int) -> int:
        return self.a[t - 1] if 1 <= t <= self.r else 0

    def q(self, s: int, t: int) -> int:
        key = (s, t)
        got = self._memo.get(key)
        if got is not None:
            return got
        if t >= s:
            prev, cur = 0, 1
            if t == s:
                val = 0
            else:
                for u in range(s + 2, t + 1):
                    prev, cur = cur, self.coeff(u - 1) * cur - prev
                val = cur
        else:
            nxt, cur = 0, -1
            for u in range(s - 2, t - 1, -1):
                nxt, cur = cur, self.coeff(u + 1) * cur - nxt
            val = cur
        self._memo[key] = val
        return val


def q_table(exp: HJExpansion) -> QTable:
    return QTable(exp.a)


def d_expansion(d: int, exp: HJExpansion) -> list[int]:
    """Greedy digits (d_1..d_r) with d = sum_t i_t d_t and bounded tails."""
    if not (0 <= d < exp.n):
        raise OutOfRange(f"need 0 <= d < {exp.n}, got {d}")
    digits = []
    rest = d
    for t in range(1, exp.r + 1):
        digits.append(rest // exp.i_seq[t])
        rest %= exp.i_seq[t]
    assert rest == 0
    return digits


def c_values(dexp: list[int], table: QTable) -> list[int]:
    """c_j = sum_{t<j} q(t,j) d_t for j = 0..r+1 (c_0 = c_1 = 0)."""
    r = table.r
    if len(dexp) != r:
        raise BadArguments(f"expected {r} digits, got {len(dexp)}")
    return [sum(table.q(t, j) * dexp[t - 1] for t in range(1, j)) for j in range(r + 2)]


def _q_matrix(a: tuple[int, ...], lo: int, hi: int) -> np.ndarray:
    """Dense q(s,t) for s,t in [lo, hi] as an int64 matrix."""
    size = hi - lo + 1
    coeffs = [a[t - 1] if 1 <= t <= len(a) else 0 for t in range(lo - 1, hi + 2)]
    mat = np.zeros((size, size), dtype=np.int64)
    for si, s in enumerate(range(lo, hi + 1)):
        if si + 1 < size:
            mat[si, si + 1] = 1
        for ti in range(si + 2, size):
            t = lo + ti
            mat[si, ti] = coeffs[t - 1 - (lo - 1)] * mat[si, ti - 1] - mat[si, ti - 2]
        for ti in range(si - 1, -1, -1):
            t = lo + ti
            nxt = mat[si, ti + 2] if ti + 2 < size else (1 if ti + 2 == si + 1 else 0)
            mat[si, ti] = coeffs[t + 1 - (lo - 1)] * mat[si, ti + 1] - nxt
    return mat


def identity_violations(n_max: int) -> list[str]:
    """Check every identity for all coprime pairs with n <= n_max.

    Covers: the three-term product identity on [-1, r+2]; nested monotonicity
    0 <= q(s',t') < q(s,t); determinant invariance across columns; i_t =
    q(t, r+1); digit bounds and the maximal-digit separation condition; and
    the weighted tail bounds sum_{t=k+1}^{j-1} q(t,j) d_t < q(k,j) for every
    0 <= d < n. Returns human-readable violation strings (empty = all good).
    """
    bad: list[str] = []
    for n in range(2, n_max + 1):
        for q in range(1, n):
            if gcd(n, q) != 1:
                continue
            exp = hj_expand(n, q)
            r = exp.r
            lo, hi = -2, r + 3
            mat = _q_matrix(exp.a, lo, hi)

            def qm(s, t):
                return int(mat[s - lo, t - lo])

            # Spot-check the dense window against the memoized table.
            table = q_table(exp)
            probe = range(lo, hi + 1) if r <= 10 else (lo, 0, 1, r // 2, r, r + 1, hi)
            for s in probe:
                for t in probe:
                    if qm(s, t) != table.q(s, t):
                        bad.append(f"({n},{q}): table mismatch at ({s},{t})")
            for t in range(0, r + 2):
                if qm(t, r + 1) != exp.i_seq[t]:
                    bad.append(f"({n},{q}): i_{t} != q({t},{r + 1})")
            # Three-term identity for every k with [k, k+1] inside the
            # window; the outer-product form checks all (s,t) at once.
            for ki in range(mat.shape[0] - 1):
                prod = np.outer(mat[:, ki + 1], mat[ki, :]) - np.outer(mat[:, ki], mat[ki + 1, :])
                if not np.array_equal(prod, mat):
                    bad.append(f"({n},{q}): three-term identity fails at k={lo + ki}")
            # Nested monotonicity on the triangle 0 <= s <= t <= r+1: the
            # running maximum over proper sub-intervals must stay below the
            # interval's own value. Adjacent shrink steps generate all
            # nestings, so the DP is exact.
            off = -lo
            sub = mat[off : off + r + 2, off : off + r + 2]
            size = r + 2
            neg = -(1 << 60)
            best = [[neg] * size for _ in range(size)]
            ok = True
            for s in range(size - 1, -1, -1):
                for t in range(s, size):
                    val = int(sub[s, t])
                    inner = neg
                    if s + 1 <= t:
                        inner = max(inner, best[s + 1][t])
                    if t - 1 >= s:
                        inner = max(inner, best[s][t - 1])
                    best[s][t] = max(val, inner)
                    if val < 0 or (inner != neg and inner >= val):
                        ok = False
            if not ok:
                bad.append(f"({n},{q}): nested monotonicity fails")
            # Determinant invariance for x = i_seq, y = q(s, .).
            for s in range(0, r + 1):
                dets = {
                    exp.i_seq[l] * qm(s, l + 1) - exp.i_seq[l + 1] * qm(s, l)
                    for l in range(0, r + 1)
                }
                if len(dets) != 1:
                    bad.append(f"({n},{q}): determinant varies for s={s}")
            # Digit conditions, tail bounds and the floor recursion for every
            # admissible d, with the (k,j) sweeps done as matrix programs.
            q_t_rows = mat[off + 1 : off + r + 1, off : off + r + 2]  # t in 1..r
            q_k_rows = mat[off : off + r + 1, off : off + r + 2]  # k in 0..r
            q_j_rows = mat[off : off + r + 2, off : off + r + 2]  # j in 0..r+1
            js = np.arange(r + 2)
            for d in range(n):
                digits = d_expansion(d, exp)
                if sum(x * i for x, i in zip(digits, exp.i_seq[1:])) != d:
                    bad.append(f"({n},{q}): digits of {d} do not recompose")
                if any(not (0 <= digits[t] <= exp.a[t] - 1) for t in range(r)):
                    bad.append(f"({n},{q}): digit bound fails for d={d}")
                # Between two maximal digits some intermediate digit must
                # drop to a_l - 3 or below; consecutive maximal pairs
                # generate the general case.
                maxed = [t for t in range(r) if digits[t] == exp.a[t] - 1]
                for s_idx, t_idx in zip(maxed, maxed[1:]):
                    if not any(digits[l] <= exp.a[l] - 3 for l in range(s_idx + 1, t_idx)):
                        bad.append(f"({n},{q}): maximal digits at {s_idx},{t_idx} unseparated for d={d}")
                dv = np.array(digits, dtype=np.int64)
                weighted = q_t_rows * dv[:, None]
                carr = np.zeros((r + 1, r + 2), dtype=np.int64)
                np.cumsum(weighted, axis=0, out=carr[1:])
                # carr[k, j] = sum_{t <= k} q(t,j) d_t; the c-values are its
                # first superdiagonal.
                cv = np.concatenate(([0], np.diagonal(carr, offset=1)))
                if cv[0] != 0 or int(cv[-1]) != d:
                    bad.append(f"({n},{q}): c-values endpoints wrong for d={d}")
                cummin = np.minimum.accumulate(carr + q_k_rows, axis=0)
                lhs = np.diagonal(carr, offset=1)
                rhs = np.diagonal(cummin, offset=1)
                if not np.all(lhs < rhs):
                    bad.append(f"({n},{q}): tail bound fails for d={d}")
                # Floor recursion c_j = floor((q(j,l) c_{j-1} + c_l) / q(j-1,l))
                # over 1 <= j <= l <= r+1.
                num = q_j_rows[1:, :] * cv[:-1, None] + cv[None, :]
                den = q_j_rows[:-1, :]
                mask = (js[1:, None] <= js[None, :]) & (js[None, :] >= 1)
                # q(j-1, l) >= 1 wherever the mask holds, so the dummy
                # divisor outside it never feeds a real comparison.
                got = num // np.where(mask, den, 1)
                if not np.array_equal(np.where(mask, got, 0), np.where(mask, cv[1:, None], 0)):
                    bad.append(f"({n},{q}): floor recursion fails for d={d}")
    return bad
