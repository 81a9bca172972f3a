"""Top-level root counting for t-nomial n x n systems with t <= n+2.

count_positive / count_torus / count_affine orchestrate the pipeline:
support normalization, genericity checks, reduction to a binomial system
(t = n+1) or to a univariate linear combination of logarithms (t = n+2),
certified sign determination, and the coordinate-subspace stratification
for affine counts. Degenerate inputs are reported as refusals or as
infinite counts, never silently miscounted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import binomial as bino
from .errors import GenericityError, HyperplaneSupport, InternalError, SingularExponents
from .gale import (
    NO_POSITIVE_ROOTS,
    CircuitData,
    GaleSystem,
    Support,
    check_genericity,
    find_subcircuit,
    reduce_to_gale,
    reindex_for_torus,
)
from .linalg import det_int, rank, rank_mod2, rref, pivot_columns, smith
from .logsign import (
    CriticalCache,
    LogLinForm,
    count_roots_in_interval,
    precision_budget,
)

__all__ = [
    "PolySystem",
    "CountResult",
    "OrthantSelector",
    "count_positive",
    "count_torus",
    "count_affine",
    "count_positive_ex",
    "count_torus_ex",
    "count_affine_ex",
    "orthant_selector",
]


@dataclass(frozen=True)
class PolySystem:
    """n x n system supported on t distinct exponent vectors, t in {n+1, n+2}.

    ``coeffs[i][j]`` multiplies x^{support.points[j]} in the i-th equation.
    Every equation must be nonzero and every support point must actually
    occur in some equation (A is the union of the supports).
    """

    support: Support
    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n, t = self.support.n, self.support.t
        if t not in (n + 1, n + 2):
            raise ValueError(f"unsupported support size t={t} for n={n}")
        if len(self.coeffs) != n or any(len(row) != t for row in self.coeffs):
            raise ValueError("coefficient matrix must be n x t")
        for i, row in enumerate(self.coeffs):
            if all(c == 0 for c in row):
                raise ValueError(f"equation {i} is identically zero")
        for j in range(t):
            if all(row[j] == 0 for row in self.coeffs):
                raise ValueError(f"support point {j} appears in no equation")

    @property
    def n(self) -> int:
        return self.support.n

    @property
    def t(self) -> int:
        return self.support.t


@dataclass(frozen=True)
class CountResult:
    """Finite(k) | Infinite | GenericityFailure | UnverifiedGenericity(k)."""

    kind: str
    count: Optional[int] = None
    detail: str = ""

    @staticmethod
    def finite(k: int) -> "CountResult":
        return CountResult("finite", k)

    @staticmethod
    def infinite(detail: str = "") -> "CountResult":
        return CountResult("infinite", None, detail)

    @staticmethod
    def genericity_failure(detail: str) -> "CountResult":
        return CountResult("genericity_failure", None, detail)

    @staticmethod
    def unverified(k: int, caveat: str) -> "CountResult":
        return CountResult("unverified_genericity", k, caveat)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


@dataclass(frozen=True)
class OrthantSelector:
    """Mod-2 data deciding which cells of R carry torus roots.

    Lambda(u) multiplies the signs of the arguments with odd relation
    entries; the columns r..n-1 of V mod 2 give the conditions
    Gamma'_k(u) > 0.
    """

    v_mod2: tuple[tuple[int, ...], ...]
    r: int
    b_parities: tuple[int, ...]


def orthant_selector(gs: GaleSystem, support: Support) -> OrthantSelector:
    """Smith data of the exponent block [a_1 .. a_n] in the canonical frame."""
    n = support.n
    a = [[support.points[j][i] for j in range(n)] for i in range(n)]
    if det_int(a) == 0:
        raise SingularExponents("exponent block [a_1..a_n] is singular")
    st = smith(a)
    r = rank_mod2(a)
    v_mod2 = tuple(tuple(x & 1 for x in row) for row in st.v)
    parities = tuple(b & 1 for b in gs.relation[: gs.m])
    return OrthantSelector(v_mod2, r, parities)


# -- t = n+1: binomial path ---------------------------------------------------


def _reduce_n1(system: PolySystem):
    """RREF the n x (n+1) coefficient matrix into x^A = gamma form.

    Returns (exponent rows, gamma) or a CountResult for early exits.
    """
    n = system.n
    r, _ = rref(system.coeffs)
    piv = pivot_columns(r)
    if len(piv) < n:
        return CountResult.genericity_failure("coefficient matrix has rank < n")
    free = next(j for j in range(n + 1) if j not in piv)
    gammas = [-r[i][free] for i in range(n)]
    if any(g == 0 for g in gammas):
        # a whole equation collapsed to a single monomial = 0
        return CountResult.finite(0)
    pts = system.support.points
    cols = [tuple(pts[p][i] - pts[free][i] for i in range(n)) for p in piv]
    exps = tuple(tuple(col[i] for col in cols) for i in range(n))
    return exps, tuple(gammas)


# -- t = n+2: circuit path ----------------------------------------------------


@dataclass
class _CircuitFrame:
    support: Support
    coeffs: tuple[tuple[int, ...], ...]
    cd: CircuitData
    perm: tuple[int, ...]


def _canonical_frame(system: PolySystem) -> _CircuitFrame:
    cd = find_subcircuit(system.support)
    support2, cd2, perm = reindex_for_torus(system.support, cd)
    coeffs2 = tuple(tuple(row[j] for j in perm) for row in system.coeffs)
    return _CircuitFrame(support2, coeffs2, cd2, perm)


def _log_form(gs: GaleSystem) -> LogLinForm:
    terms = [
        (b, g1, g0)
        for b, (g1, g0) in zip(gs.relation[: gs.m], gs.gammas[: gs.m])
    ]
    terms.append((gs.relation[gs.m], Fraction(1), Fraction(0)))
    return LogLinForm(tuple(terms))


def _breakpoints(gs: GaleSystem) -> list[Fraction]:
    """Zeros of all n+1 linear forms (the u > 0 form contributes 0)."""
    points = {Fraction(0)}
    for g1, g0 in gs.gammas:
        if g1 != 0:
            points.add(-g0 / g1)
    return sorted(points)


def _cells(breaks: Sequence[Fraction]):
    edges: list[Optional[Fraction]] = [None, *breaks, None]
    return list(zip(edges, edges[1:]))


def _cell_sample(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def _cell_eligible(
    gs: GaleSystem, sel: OrthantSelector, lo: Optional[Fraction], hi: Optional[Fraction]
) -> bool:
    """Lambda(u) = sign(u) and Gamma'_{r+1..n}(u) > 0 on the open cell."""
    s = _cell_sample(lo, hi)
    eps = []
    for g1, g0 in gs.gammas:
        v = g1 * s + g0
        if v == 0:
            raise InternalError("cell sample hit a linear-form zero")
        eps.append(1 if v > 0 else -1)
    su = 1 if s > 0 else -1
    if s == 0:
        raise InternalError("cell sample hit u = 0")
    lam = 1
    for e, par in zip(eps, sel.b_parities):
        if par:
            lam *= e
    if lam != su:
        return False
    n = gs.n
    for k in range(sel.r, n):
        g = 1
        for i in range(n):
            if sel.v_mod2[i][k]:
                g *= eps[i]
        if g < 0:
            return False
    return True


# -- public counting operations ----------------------------------------------


def count_positive_ex(system: PolySystem) -> tuple[CountResult, dict]:
    """Count roots in the open positive orthant, with diagnostics."""
    details: dict = {"target": "positive"}
    if system.t == system.n + 1:
        return _positive_n1(system, details)
    frame = _canonical_frame(system)
    details["permutation"] = frame.perm
    rep = check_genericity(frame.coeffs)
    details["genericity"] = rep
    if not rep.passed:
        return CountResult.genericity_failure(rep.failing_minor), details
    gs = reduce_to_gale(frame.support, frame.coeffs, frame.cd, require_positive_form=True)
    if gs is NO_POSITIVE_ROOTS:
        details["reason"] = "positivity assumption fails or interval empty"
        return CountResult.finite(0), details
    details["relation"] = gs.relation
    details["gammas"] = gs.gammas
    details["interval"] = gs.interval
    try:
        L = _log_form(gs)
    except GenericityError as e:
        return CountResult.genericity_failure(str(e)), details
    budget = precision_budget(L)
    cache = CriticalCache(L, budget)
    details["log_terms"] = L.terms
    details["critical_poly"] = cache.g
    details["critical_intervals"] = [(iv.lo, iv.hi) for iv in cache.intervals]
    details["budget"] = budget
    lo, hi = gs.interval
    changes, degen = count_roots_in_interval(L, lo, hi, cache=cache)
    details["cells"] = [
        {
            "lo": lo,
            "hi": hi,
            "eligible": True,
            "changes": changes,
            "degenerate": degen,
        }
    ]
    details["critical_cache"] = cache
    details["degenerate_roots"] = degen
    return CountResult.finite(changes + degen), details


def _positive_n1(system: PolySystem, details: dict) -> tuple[CountResult, dict]:
    details["path"] = "n+1"
    if rank(system.support.hat_matrix()) != system.n + 1:
        raise HyperplaneSupport("support lies in an affine hyperplane")
    red = _reduce_n1(system)
    if isinstance(red, CountResult):
        return red, details
    exps, gammas = red
    details["binomial_rhs"] = gammas
    count = bino.count_positive_binomial(bino.BinomialSystem(exps, gammas))
    if count is bino.INFINITE:
        # impossible with independent exponents; keep the honest branch anyway
        return CountResult.infinite("binomial system with dependent exponents"), details
    return CountResult.finite(count), details


def count_torus_ex(system: PolySystem) -> tuple[CountResult, dict]:
    """Count roots with all coordinates nonzero, with diagnostics."""
    details: dict = {"target": "torus"}
    if system.t == system.n + 1:
        details["path"] = "n+1"
        if rank(system.support.hat_matrix()) != system.n + 1:
            raise HyperplaneSupport("support lies in an affine hyperplane")
        red = _reduce_n1(system)
        if isinstance(red, CountResult):
            return red, details
        exps, gammas = red
        details["binomial_rhs"] = gammas
        count = bino.count_torus_binomial(bino.BinomialSystem(exps, gammas))
        return CountResult.finite(count), details
    frame = _canonical_frame(system)
    details["permutation"] = frame.perm
    rep = check_genericity(frame.coeffs)
    details["genericity"] = rep
    if not rep.passed:
        return CountResult.genericity_failure(rep.failing_minor), details
    gs = reduce_to_gale(frame.support, frame.coeffs, frame.cd, require_positive_form=False)
    details["relation"] = gs.relation
    details["gammas"] = gs.gammas
    try:
        L = _log_form(gs)
    except GenericityError as e:
        return CountResult.genericity_failure(str(e)), details
    sel = orthant_selector(gs, frame.support)
    details["selector"] = sel
    budget = precision_budget(L)
    cache = CriticalCache(L, budget)
    details["log_terms"] = L.terms
    details["critical_poly"] = cache.g
    details["budget"] = budget
    factor = 1 << (gs.n - sel.r)
    details["orthant_factor"] = factor
    cells_out = []
    total = 0
    for lo, hi in _cells(_breakpoints(gs)):
        eligible = _cell_eligible(gs, sel, lo, hi)
        entry = {"lo": lo, "hi": hi, "eligible": eligible}
        if eligible:
            changes, degen = count_roots_in_interval(L, lo, hi, cache=cache)
            entry["changes"] = changes
            entry["degenerate"] = degen
            total += changes + degen
        cells_out.append(entry)
    details["cells"] = cells_out
    details["critical_cache"] = cache
    return CountResult.finite(factor * total), details


def _axis_points(support: Support, axis: int) -> list[int]:
    return [
        j
        for j, p in enumerate(support.points)
        if all(x == 0 for i, x in enumerate(p) if i != axis)
    ]


def _stratum_certified_empty(system: PolySystem, zero_set: tuple[int, ...]) -> bool:
    """Exact emptiness certificate for the torus part of {x_i = 0, i in S}.

    Works when the restricted support is the vertex set of a simplex: with
    full column rank of the restricted coefficients the only solution of
    the linearized system is zero, which the torus excludes.
    """
    n = system.n
    pts = [
        j
        for j, p in enumerate(system.support.points)
        if all(p[i] == 0 for i in zero_set)
    ]
    if not pts:
        raise InternalError("empty stratum support should have been caught earlier")
    keep = [i for i in range(n) if i not in zero_set]
    proj = [tuple(system.support.points[j][i] for i in keep) for j in pts]
    hat = [[1] * len(pts)] + [[q[d] for q in proj] for d in range(len(keep))]
    if rank(hat) < len(pts):
        return False  # restricted support is a circuit, not a simplex
    cols = [[row[j] for j in pts] for row in system.coeffs]
    return rank(cols) == len(pts)


def count_affine_ex(system: PolySystem) -> tuple[CountResult, dict]:
    """Count roots in all of R^n via the coordinate-subspace stratification.

    Infinitude certificates that depend only on the support are decided
    first, so they are reported even when torus counting would refuse the
    instance on genericity grounds.
    """
    details: dict = {"target": "affine"}
    n = system.n
    pts = system.support.points
    mins = [min(p[i] for p in pts) for i in range(n)]
    details["coordinate_minima"] = mins
    if n == 1:
        torus, torus_details = count_torus_ex(system)
        details["torus"] = torus_details
        if torus.kind != "finite":
            return torus, details
        # the only point off the torus is u = 0; a root there iff x divides f
        extra = 1 if mins[0] > 0 else 0
        details["origin_root"] = bool(extra)
        return CountResult.finite(torus.count + extra), details
    if any(m > 0 for m in mins):
        i = next(i for i, m in enumerate(mins) if m > 0)
        return CountResult.infinite(f"x_{i + 1} divides every equation"), details
    zset = [i for i, m in enumerate(mins) if m == 0]
    ell = len(zset)
    origin_root = False
    strata: list[tuple[int, ...]] = []
    if ell == n:
        for i in range(n):
            if not _axis_points(system.support, i):
                return (
                    CountResult.infinite(
                        f"the x_{i + 1}-axis lies in the zero set (no support on it)"
                    ),
                    details,
                )
        origin_root = tuple([0] * n) not in pts
        strata = list(_proper_subsets(range(n)))
    elif ell > 0:
        restricted = [j for j, p in enumerate(pts) if all(p[i] == 0 for i in zset)]
        if not restricted:
            return (
                CountResult.infinite(
                    "no support point survives on the minimal coordinate subspace"
                ),
                details,
            )
        strata = list(_nonempty_subsets(zset))
    torus, torus_details = count_torus_ex(system)
    details["torus"] = torus_details
    if torus.kind != "finite":
        return torus, details
    unverified = [s for s in strata if not _stratum_certified_empty(system, s)]
    total = torus.count + (1 if origin_root else 0)
    details["origin_root"] = origin_root
    details["unverified_strata"] = unverified
    if unverified:
        names = ", ".join("{" + ", ".join(f"x_{i + 1}" for i in s) + "}" for s in unverified)
        return (
            CountResult.unverified(
                total,
                f"zero contribution of the strata {names} rests on genericity "
                "not certified by the simplex rank test",
            ),
            details,
        )
    return CountResult.finite(total), details


def _proper_subsets(rng):
    items = list(rng)
    n = len(items)
    for mask in range(1, (1 << n) - 1):
        yield tuple(items[i] for i in range(n) if mask >> i & 1)


def _nonempty_subsets(items):
    items = list(items)
    n = len(items)
    for mask in range(1, 1 << n):
        yield tuple(items[i] for i in range(n) if mask >> i & 1)


def count_positive(system: PolySystem) -> CountResult:
    return count_positive_ex(system)[0]


def count_torus(system: PolySystem) -> CountResult:
    return count_torus_ex(system)[0]


def count_affine(system: PolySystem) -> CountResult:
    return count_affine_ex(system)[0]
