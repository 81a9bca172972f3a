"""Root counting for binomial systems x^A = c via Smith factorization.

The exponent matrix A holds a_j as its j-th column; a Smith factorization
U A V = S turns the system into independent one-variable equations
y_j^{s_j} = c'_j with c' = c^V, from which counts over the positive orthant
and over the real torus follow by sign bookkeeping alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SingularExponents
from .linalg import det_int, rank_mod2, smith

__all__ = ["BinomialSystem", "INFINITE", "count_positive_binomial", "count_torus_binomial"]


class _Infinite:
    """Singleton marker for an infinite root count."""

    def __repr__(self):
        return "INFINITE"


INFINITE = _Infinite()


@dataclass(frozen=True)
class BinomialSystem:
    """System (x^{a_1} - c_1, ..., x^{a_n} - c_n); column j of exponents is a_j."""

    exponents: tuple[tuple[int, ...], ...]  # n x n, rows of the matrix
    rhs: tuple[Fraction, ...]

    def __post_init__(self):
        if any(c == 0 for c in self.rhs):
            raise ValueError("right-hand sides must be nonzero")


def _rhs_power(rhs: tuple[Fraction, ...], column: list[int]) -> Fraction:
    out = Fraction(1)
    for c, e in zip(rhs, column):
        out *= Fraction(c) ** e
    return out


def count_positive_binomial(sys: BinomialSystem):
    """Number of roots in the open positive orthant: 0, 1 or INFINITE."""
    a = [list(row) for row in sys.exponents]
    n = len(a)
    if any(c < 0 for c in sys.rhs):
        return 0
    if det_int(a) != 0:
        return 1
    st = smith(a)
    diag = st.diagonal()
    j = sum(1 for s in diag if s != 0)
    # c' = c^V; only the entries past the rank matter
    for i in range(j, n):
        col = [st.v[k][i] for k in range(n)]
        if _rhs_power(sys.rhs, col) != 1:
            return 0
    return INFINITE


def count_torus_binomial(sys: BinomialSystem) -> int:
    """Number of roots with all coordinates nonzero: 0 or 2^(n-r).

    r is the rank of the exponent matrix mod 2; the sign test uses
    sign(c)^(V mod 2) so no large powers are ever formed.
    """
    a = [list(row) for row in sys.exponents]
    n = len(a)
    if det_int(a) == 0:
        raise SingularExponents("exponent vectors are linearly dependent")
    st = smith(a)
    r = rank_mod2(a)
    signs = [1 if c > 0 else -1 for c in sys.rhs]
    for i in range(r, n):
        s = 1
        for k in range(n):
            if st.v[k][i] & 1:
                s *= signs[k]
        if s < 0:
            return 0
    return 1 << (n - r)
