"""Circuit combinatorics and reduction of an (n+2)-nomial system to Gale form.

The support A = {a_1, ..., a_{n+2}} in Z^n carries a unique (up to sign)
primitive affine relation b; its nonzero coordinates single out the unique
non-degenerate sub-circuit Sigma. After re-indexing so that Sigma occupies
positions {1..m, n+1, n+2} (with an odd relation entry at n+1) and
translating a_{n+2} to the origin, exact row reduction of the coefficient
matrix rewrites the system as

    x^{a_i} = gamma_{i,1} x^{a_{n+1}} + gamma_{i,0},   i = 1..n,

which is the bridge to a univariate linear combination of logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import GenericityError, HyperplaneSupport, InternalError
from .linalg import det_int, primitive_right_kernel, rank, rref, pivot_columns

__all__ = [
    "Support",
    "CircuitData",
    "GaleSystem",
    "GenericityReport",
    "NO_POSITIVE_ROOTS",
    "EMPTY_INTERVAL",
    "find_subcircuit",
    "reindex_for_torus",
    "check_genericity",
    "reduce_to_gale",
    "interval_I",
]


class _NoPositiveRoots:
    def __repr__(self):
        return "NO_POSITIVE_ROOTS"


class _EmptyInterval:
    def __repr__(self):
        return "EMPTY_INTERVAL"


NO_POSITIVE_ROOTS = _NoPositiveRoots()
EMPTY_INTERVAL = _EmptyInterval()


@dataclass(frozen=True)
class Support:
    """Distinct exponent vectors a_1, ..., a_t in Z^n."""

    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("support points must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.points[0])

    @property
    def t(self) -> int:
        return len(self.points)

    def hat_matrix(self) -> list[list[int]]:
        """(n+1) x t matrix whose j-th column is (1, a_j)."""
        cols = self.points
        return [[1] * self.t] + [[p[i] for p in cols] for i in range(self.n)]

    def translated(self, shift: tuple[int, ...]) -> "Support":
        return Support(tuple(tuple(x - s for x, s in zip(p, shift)) for p in self.points))


@dataclass(frozen=True)
class CircuitData:
    """The unique non-degenerate sub-circuit and its primitive relation.

    ``sigma_indices[k]`` is the support position of the k-th sub-circuit
    point and ``relation[k]`` its (nonzero) relation entry; gcd of the
    relation is 1 and the entries sum to zero.
    """

    sigma_indices: tuple[int, ...]
    relation: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.sigma_indices) - 2


def find_subcircuit(support: Support) -> CircuitData:
    """Locate Sigma by the nonzero coordinates of the primitive kernel of A-hat.

    Requires t = n+2 and a support affinely spanning R^n; a support inside an
    affine hyperplane raises HyperplaneSupport (the caller is expected to
    reduce the dimension by a monomial change of variables, which is out of
    scope here).
    """
    n, t = support.n, support.t
    if t != n + 2:
        raise ValueError(f"expected {n + 2} support points, got {t}")
    hat = support.hat_matrix()
    if rank(hat) != n + 1:
        raise HyperplaneSupport("support lies in an affine hyperplane")
    b = primitive_right_kernel(hat)
    sigma = tuple(j for j, x in enumerate(b) if x != 0)
    return CircuitData(sigma, tuple(b[j] for j in sigma))


def reindex_for_torus(
    support: Support, cd: CircuitData
) -> tuple[Support, CircuitData, tuple[int, ...]]:
    """Permute and translate the support into the pipeline's canonical frame.

    After the permutation Sigma sits at positions {1..m, n+1, n+2}, the
    relation entry at position n+1 is odd, the entry at position n+2 is
    positive (global sign choice), and a_{n+2} is the origin. Returns the
    new support, the matching circuit data, and the permutation (the k-th
    new point is the old point perm[k]).

    The permutation is minimal: when the last two support points already
    close the sub-circuit with an odd entry second-from-last, the order is
    kept as given. Otherwise the last Sigma point moves to n+2 and the
    lowest-index Sigma point with an odd entry moves to n+1.
    """
    n = support.n
    sigma = list(cd.sigma_indices)
    rel = {j: x for j, x in zip(cd.sigma_indices, cd.relation)}
    last, second = sigma[-1], sigma[-2]
    if second == support.t - 2 and last == support.t - 1 and rel[second] % 2 != 0:
        at_n1, at_n2 = second, last
    else:
        at_n2 = last
        odd = [j for j in sigma if rel[j] % 2 != 0 and j != at_n2]
        if not odd:
            # gcd(b)=1 and sum(b)=0 force at least two odd entries
            raise InternalError("no odd relation entry available for position n+1")
        at_n1 = odd[0]
    front = [j for j in sigma if j not in (at_n1, at_n2)]
    middle = [j for j in range(support.t) if j not in cd.sigma_indices]
    perm = tuple(front + middle + [at_n1, at_n2])
    new_points = tuple(support.points[j] for j in perm)
    origin = new_points[-1]
    new_support = Support(new_points).translated(origin)
    new_sigma = tuple(
        k for k, j in enumerate(perm) if j in cd.sigma_indices
    )
    new_rel = [rel[perm[k]] for k in new_sigma]
    if new_rel[-1] < 0:
        new_rel = [-x for x in new_rel]
    new_cd = CircuitData(new_sigma, tuple(new_rel))
    if new_cd.relation[-2] % 2 == 0:
        raise InternalError("relation entry at position n+1 is even after reindexing")
    return new_support, new_cd, perm


@dataclass(frozen=True)
class GenericityReport:
    passed: bool
    failing_minor: Optional[str] = None


def _minor_det(coeffs: Sequence[Sequence[int]], cols: Sequence[int]) -> int:
    return det_int([[row[c] for c in cols] for row in coeffs])


def check_genericity(coeffs: Sequence[Sequence[int]]) -> GenericityReport:
    """Non-singularity of the minors that certify the Gale reduction.

    For an n x (n+2) coefficient matrix (already in the canonical column
    order): all n x n sub-matrices of the columns {1..n, n+2}, and every
    2 x 2 minor of the last two columns.
    """
    n = len(coeffs)
    cols = list(range(n)) + [n + 1]
    for omit in cols:
        sub = [c for c in cols if c != omit]
        if _minor_det(coeffs, sub) == 0:
            return GenericityReport(False, f"n x n minor (columns {sub}) is singular")
    for i in range(n):
        for j in range(i + 1, n):
            d = coeffs[i][n] * coeffs[j][n + 1] - coeffs[i][n + 1] * coeffs[j][n]
            if d == 0:
                return GenericityReport(
                    False, f"2 x 2 minor of the last two columns at rows ({i}, {j}) is singular"
                )
    return GenericityReport(True)


@dataclass(frozen=True)
class GaleSystem:
    """Reduced form g_i = x^{a_i} - gamma_{i,1} x^{a_{n+1}} - gamma_{i,0}.

    ``gammas[i]`` is the pair (gamma_{i+1,1}, gamma_{i+1,0}); the pair for
    index n+1 is (1, 0) by convention and is not stored. ``relation`` is the
    circuit relation b_1..b_{m+2} aligned with the canonical positions, and
    ``interval`` is the positivity interval I (endpoints or EMPTY_INTERVAL;
    None stands for an infinite endpoint).
    """

    n: int
    m: int
    gammas: tuple[tuple[Fraction, Fraction], ...]
    relation: tuple[int, ...]
    interval: object
    height_budget_log: float

    def term_gammas(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """The m pairs feeding the log-linear form (positions 1..m)."""
        return self.gammas[: self.m]


def reduce_to_gale(
    support: Support,
    coeffs: Sequence[Sequence[int]],
    cd: CircuitData,
    require_positive_form: bool = True,
):
    """Row-reduce the system to Gale dual form.

    Expects the canonical frame produced by ``reindex_for_torus`` (Sigma at
    {1..m, n+1, n+2}, a_{n+2} the origin) and a coefficient matrix passing
    ``check_genericity``. Returns NO_POSITIVE_ROOTS when positivity is
    required and some row has max(gamma_1, gamma_0) <= 0 or the interval I
    is empty; torus counting passes require_positive_form=False.
    """
    n = support.n
    r, _ = rref(coeffs)
    if pivot_columns(r) != list(range(n)):
        raise GenericityError("leftmost n x n block is singular")
    gammas = tuple((-r[i][n], -r[i][n + 1]) for i in range(n))
    hmax = 1
    for g1, g0 in gammas:
        for g in (g1, g0):
            hmax = max(hmax, abs(g.numerator), g.denominator)
    hin = max(1, max(abs(x) for row in coeffs for x in row))
    budget = support.n * (0.5 * _log_int(support.n) + _log_int(hin))
    # Cramer + Hadamard: every gamma is a ratio of n x n minors
    if not _height_within_hadamard(hmax, n, hin):
        raise InternalError("gamma heights exceed the Cramer-Hadamard budget")
    gs = GaleSystem(
        n=n,
        m=cd.m,
        gammas=gammas,
        relation=cd.relation,
        interval=None,
        height_budget_log=budget,
    )
    iv = interval_I(gs)
    gs = GaleSystem(gs.n, gs.m, gs.gammas, gs.relation, iv, gs.height_budget_log)
    if require_positive_form:
        if any(max(g1, g0) <= 0 for g1, g0 in gammas):
            return NO_POSITIVE_ROOTS
        if iv is EMPTY_INTERVAL:
            return NO_POSITIVE_ROOTS
    return gs


def _log_int(x: int) -> float:
    import math

    return math.log(max(x, 1))


def _height_within_hadamard(hmax: int, n: int, hin: int) -> bool:
    # |numerator|, |denominator| <= n^(n/2) * hin^n, squared to stay integral
    return hmax * hmax <= (n * hin * hin) ** n


def interval_I(gs: GaleSystem):
    """Intersection of the half-lines gamma_{i,1} u + gamma_{i,0} > 0, i = 1..n+1.

    The convention pair (1, 0) for i = n+1 contributes u > 0. Returns
    (lo, hi) with hi possibly None for +infinity, or EMPTY_INTERVAL.
    """
    lo = Fraction(0)  # from the (1, 0) convention pair
    hi: Optional[Fraction] = None
    for g1, g0 in gs.gammas:
        if g1 == 0:
            if g0 <= 0:
                return EMPTY_INTERVAL
            continue
        root = -g0 / g1
        if g1 > 0:
            lo = max(lo, root)
        else:
            hi = root if hi is None else min(hi, root)
    if hi is not None and lo >= hi:
        return EMPTY_INTERVAL
    return (lo, hi)
