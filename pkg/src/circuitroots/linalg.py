"""Exact linear algebra over the integers and rationals.

Matrices are plain lists of row lists; integer matrices hold Python ints
(arbitrary precision), rational ones hold ``fractions.Fraction`` (always in
lowest terms with positive denominator, which is exactly the normal form
the rest of the pipeline relies on). Everything here is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .ball import Ball, Dyadic, D_ZERO, log_ball
from .errors import RankError

__all__ = [
    "SmithTriple",
    "rref",
    "hermite",
    "smith",
    "primitive_right_kernel",
    "rank_mod2",
    "rank",
    "det_int",
    "height",
    "identity_int",
    "mat_mul_int",
]

IntMatrix = list[list[int]]
RatMatrix = list[list[Fraction]]


def identity_int(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul_int(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def rref(m: Sequence[Sequence]) -> tuple[RatMatrix, RatMatrix]:
    """Reduced row echelon form R of m, with T such that T @ m = R."""
    rows = [[Fraction(x) for x in row] for row in m]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    t = [[Fraction(int(i == j)) for j in range(nr)] for i in range(nr)]
    r = 0
    for c in range(nc):
        pivot = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        t[r], t[pivot] = t[pivot], t[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        t[r] = [x * inv for x in t[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                t[i] = [a - f * b for a, b in zip(t[i], t[r])]
        r += 1
        if r == nr:
            break
    return rows, t


def pivot_columns(r: RatMatrix) -> list[int]:
    """Pivot column indices of a matrix already in RREF."""
    pivots = []
    for row in r:
        for j, x in enumerate(row):
            if x != 0:
                pivots.append(j)
                break
    return pivots


def rank(m: Sequence[Sequence]) -> int:
    r, _ = rref(m)
    return len(pivot_columns(r))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hermite(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Hermite factorization U @ m = R.

    U is unimodular; R is upper triangular (row echelon) with positive
    leading entries, and entries above each pivot reduced modulo it so the
    output is canonical.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity_int(nr)
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        for i in range(r + 1, nr):
            if a[i][c] == 0:
                continue
            if a[r][c] == 0:
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
                continue
            if a[i][c] % a[r][c] == 0:
                f = a[i][c] // a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                u[i] = [x - f * y for x, y in zip(u[i], u[r])]
                continue
            g, s, t = _xgcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            a[r], a[i] = (
                [s * x + t * y for x, y in zip(a[r], a[i])],
                [-q * x + p * y for x, y in zip(a[r], a[i])],
            )
            u[r], u[i] = (
                [s * x + t * y for x, y in zip(u[r], u[i])],
                [-q * x + p * y for x, y in zip(u[r], u[i])],
            )
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return u, a


@dataclass(frozen=True)
class SmithTriple:
    """U @ M @ V = S with U, V unimodular and S diagonal, s_i | s_{i+1}."""

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix

    def diagonal(self) -> list[int]:
        k = min(len(self.s), len(self.s[0]) if self.s else 0)
        return [self.s[i][i] for i in range(k)]


def smith(m: Sequence[Sequence[int]]) -> SmithTriple:
    """Smith factorization by alternating row/column gcd elimination."""
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity_int(nr)
    v = identity_int(nc)

    def clear_row_entry(i, k):
        # zero a[i][k] against the pivot a[k][k] by unimodular row ops
        if a[i][k] % a[k][k] == 0:
            f = a[i][k] // a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
            u[i] = [x - f * y for x, y in zip(u[i], u[k])]
            return
        g, s, t = _xgcd(a[k][k], a[i][k])
        p, q = a[k][k] // g, a[i][k] // g
        a[k], a[i] = (
            [s * x + t * y for x, y in zip(a[k], a[i])],
            [-q * x + p * y for x, y in zip(a[k], a[i])],
        )
        u[k], u[i] = (
            [s * x + t * y for x, y in zip(u[k], u[i])],
            [-q * x + p * y for x, y in zip(u[k], u[i])],
        )

    def clear_col_entry(j, k):
        # zero a[k][j] against the pivot a[k][k] by unimodular column ops
        if a[k][j] % a[k][k] == 0:
            f = a[k][j] // a[k][k]
            for row in a:
                row[j] -= f * row[k]
            for row in v:
                row[j] -= f * row[k]
            return
        g, s, t = _xgcd(a[k][k], a[k][j])
        p, q = a[k][k] // g, a[k][j] // g
        for row in a:
            row[k], row[j] = s * row[k] + t * row[j], -q * row[k] + p * row[j]
        for row in v:
            row[k], row[j] = s * row[k] + t * row[j], -q * row[k] + p * row[j]

    for k in range(min(nr, nc)):
        # pick a nonzero pivot of least magnitude to keep growth down
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != k:
            a[k], a[bi] = a[bi], a[k]
            u[k], u[bi] = u[bi], u[k]
        if bj != k:
            for row in a:
                row[k], row[bj] = row[bj], row[k]
            for row in v:
                row[k], row[bj] = row[bj], row[k]
        while True:
            for i in range(k + 1, nr):
                if a[i][k]:
                    clear_row_entry(i, k)
            for j in range(k + 1, nc):
                if a[k][j]:
                    clear_col_entry(j, k)
            if all(a[i][k] == 0 for i in range(k + 1, nr)) and all(
                a[k][j] == 0 for j in range(k + 1, nc)
            ):
                # force divisibility: fold any bad entry into column k
                bad = None
                for i in range(k + 1, nr):
                    for j in range(k + 1, nc):
                        if a[i][j] % a[k][k] != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                a[k] = [x + y for x, y in zip(a[k], a[bad])]
                u[k] = [x + y for x, y in zip(u[k], u[bad])]
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
    return SmithTriple(u, a, v)


def primitive_right_kernel(m: Sequence[Sequence[int]]) -> list[int]:
    """Primitive integer generator of the right kernel of a rank (cols-1) matrix.

    Normalized so the first nonzero entry is positive. Raises RankError when
    the kernel is not one-dimensional.
    """
    r, _ = rref(m)
    pivots = pivot_columns(r)
    nc = len(m[0])
    if len(pivots) != nc - 1:
        raise RankError(f"rank {len(pivots)} != cols-1 = {nc - 1}")
    free = next(c for c in range(nc) if c not in pivots)
    vec = [Fraction(0)] * nc
    vec[free] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -r[i][free]
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def rank_mod2(m: Sequence[Sequence[int]]) -> int:
    """Rank of the entrywise mod-2 reduction over GF(2), rows as bitmasks."""
    rows = []
    for row in m:
        bits = 0
        for j, x in enumerate(row):
            if x & 1:
                bits |= 1 << j
        rows.append(bits)
    r = 0
    for col in range(len(m[0]) if m else 0):
        mask = 1 << col
        piv = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        r += 1
    return r


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def height(q: Fraction) -> Dyadic:
    """Dyadic upper bound on the logarithmic height max{log|p|, log|q|}.

    h(0) = 0 by convention. Accurate to well over 30 bits.
    """
    q = Fraction(q)
    if q == 0:
        return D_ZERO
    big = max(abs(q.numerator), q.denominator)
    if big == 1:
        return D_ZERO
    b = log_ball(Fraction(big), 40)
    return b.upper()
