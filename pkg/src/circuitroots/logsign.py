"""Signs of a linear combination of logarithms at its critical points.

L(u) = sum_i b_i log|g_{i,1} u + g_{i,0}| is handled through the integer
polynomial g whose real roots are exactly the critical points of L. Signs
of critical values are decided adaptively: ball evaluation at doubling
precision, with an exact number-field test (product-of-linear-forms == +-1
modulo the square-free part of g) deciding true zeros. The Matveev-type
bound from diophantine approximation guarantees a nonzero critical value
cannot be smaller than 2^-1.443E, so the adaptive loop is certified to
terminate; E is computed and kept as the precision ceiling but is never
approached in practice.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .ball import Ball, frac_to_dyadic_up, Dyadic, log_ball, log_of_ball
from .errors import (
    BudgetExceeded,
    GenericityError,
    InternalError,
    NotACriticalPoint,
    NotAPole,
)
from .unipoly import (
    IntPoly,
    IsolatingInterval,
    degree,
    eval_at,
    isolate_real_roots,
    poly_mul,
    primitive,
    refine,
    sign_at,
    squarefree_part,
    trim,
)

__all__ = [
    "LogLinForm",
    "PrecisionBudget",
    "CriticalSet",
    "CriticalCache",
    "precision_budget",
    "critical_poly",
    "critical_set",
    "exact_zero_test",
    "sign_at_critical_point",
    "sign_at_rational",
    "endpoint_limit_sign",
    "count_roots_in_interval",
    "pole_term_index",
]

PRECISION_CAP_ENV = "COUNT_PRECISION_CAP_BITS"


@dataclass(frozen=True)
class LogLinForm:
    """Terms (b_i, g_{i,1}, g_{i,0}) of L(u) = sum b_i log|g_{i,1} u + g_{i,0}|.

    In the root-counting pipeline the last term is the convention pair
    (b_{m+1}, 1, 0), i.e. b_{m+1} log|u|; this module treats all terms
    uniformly. The pairwise 2x2 determinants of the (g1, g0) rows must be
    nonzero, which makes the poles of L pairwise distinct.
    """

    terms: tuple[tuple[int, Fraction, Fraction], ...]

    def __post_init__(self):
        for b, _, _ in self.terms:
            if b == 0:
                raise GenericityError("zero coefficient in the log-linear form")
        for i in range(len(self.terms)):
            for j in range(i + 1, len(self.terms)):
                _, a1, a0 = self.terms[i]
                _, c1, c0 = self.terms[j]
                if a1 * c0 - a0 * c1 == 0:
                    raise GenericityError(
                        f"log arguments {i} and {j} are proportional (pole collision)"
                    )

    @property
    def m(self) -> int:
        return len(self.terms)


def pole_term_index(L: LogLinForm, w: Fraction) -> Optional[int]:
    """Index of the term whose argument vanishes at w, if any."""
    for i, (_, g1, g0) in enumerate(L.terms):
        if g1 * w + g0 == 0:
            return i
    return None


@dataclass(frozen=True)
class PrecisionBudget:
    """Certified worst-case precision requirements for sign determination.

    e_bound is the Matveev-type lower-bound exponent: a nonzero value of L
    at a critical point exceeds 2^(-1.443 * e_bound). rho is the isolation
    width exponent from the driving algorithm. Both are astronomically
    large; they serve as the ceiling the adaptive loop may never cross.
    """

    b_max: int
    log_h: float
    a_bound: Dyadic
    e_bound: Dyadic
    d_bound: Dyadic
    rho: Dyadic
    ceiling_bits: int
    cap_bits: Optional[int]

    def effective_cap(self) -> int:
        if self.cap_bits is not None:
            return self.cap_bits
        return self.ceiling_bits


def _dy_up(x: float) -> Dyadic:
    return frac_to_dyadic_up(Fraction(x) * Fraction(1001, 1000), 30)


def precision_budget(L: LogLinForm) -> PrecisionBudget:
    m = len(L.terms)
    b_max = max(abs(b) for b, _, _ in L.terms)
    hmax = 1
    for _, g1, g0 in L.terms:
        for g in (g1, g0):
            hmax = max(hmax, abs(g.numerator), g.denominator)
    log_h = max(1.0, math.log(hmax))
    inner = 2 * math.log(max(m, 2)) + (m - 1) * math.log(16) + 2 * math.log(b_max) + (
        6 * m - 2
    ) * log_h
    a_bound = inner**m
    e_bound = (
        1.4
        * m**6.5
        * 30 ** (m + 3)
        * (1 + math.log(m))
        * (1 + math.log(m * b_max))
        * a_bound
    )
    # log(8 + x) <= log 2 + max(log 8, log x), evaluated in log space
    log_x = math.log(m) + (m + 2) * math.log(2) + math.log(b_max) + 2 * m * log_h
    d_bound = m * m * math.e + (m + 2) * (math.log(2) + max(math.log(8), log_x))
    rho = 1.443 * (d_bound + math.log(12 * m) + e_bound)
    cap = os.environ.get(PRECISION_CAP_ENV)
    return PrecisionBudget(
        b_max=b_max,
        log_h=log_h,
        a_bound=_dy_up(a_bound),
        e_bound=_dy_up(e_bound),
        d_bound=_dy_up(d_bound),
        rho=_dy_up(rho),
        ceiling_bits=int(math.ceil(rho)) + 64,
        cap_bits=int(cap) if cap is not None else None,
    )


def _check_cap(prec: int, budget: PrecisionBudget):
    if prec > budget.effective_cap():
        if budget.cap_bits is not None:
            raise BudgetExceeded(
                f"adaptive precision {prec} exceeds {PRECISION_CAP_ENV}={budget.cap_bits}"
            )
        raise BudgetExceeded(
            "adaptive precision exceeded the certified ceiling; this indicates a bug"
        )


def critical_poly(L: LogLinForm) -> IntPoly:
    """Integer polynomial whose real roots are the critical points of L.

    g = sum_i b_i g_{i,1} nu_i prod_{j != i} (g_{j,1} u + g_{j,0}) nu_j with
    nu_j clearing denominators; normalized primitive with positive leading
    coefficient.
    """
    lins = []
    slopes = []
    for b, g1, g0 in L.terms:
        nu = g1.denominator * g0.denominator // gcd(g1.denominator, g0.denominator)
        lins.append([int(g0 * nu), int(g1 * nu)])
        slopes.append(b * int(g1 * nu))
    g: list[int] = []
    for i in range(len(lins)):
        if slopes[i] == 0:
            continue
        term = [slopes[i]]
        for j, lin in enumerate(lins):
            if j != i:
                term = poly_mul(term, lin)
        if len(term) > len(g):
            g, term = term, g
        for k, c in enumerate(term):
            g[k] += c
    g = trim(g)
    if not g:
        raise GenericityError("the log-linear form is constant")
    return primitive(g)


@dataclass(frozen=True)
class CriticalSet:
    """Critical polynomial, isolating intervals for its distinct real roots,
    the certified sign of L at each, and which of them are exact zeros."""

    g: IntPoly
    intervals: tuple[IsolatingInterval, ...]
    signs: tuple[int, ...]
    degenerate_flags: tuple[bool, ...]


class CriticalCache:
    """Isolated critical points of L with signs computed on demand."""

    def __init__(self, L: LogLinForm, budget: Optional[PrecisionBudget] = None):
        self.L = L
        self.budget = budget or precision_budget(L)
        self.g = critical_poly(L)
        self.q = squarefree_part(self.g) if degree(self.g) >= 1 else self.g
        self.intervals = tuple(isolate_real_roots(self.g)) if degree(self.g) >= 1 else ()
        self._signs: dict[int, int] = {}

    def sign(self, k: int) -> int:
        if k not in self._signs:
            self._signs[k] = sign_at_critical_point(self.L, self.intervals[k], self.budget)
        return self._signs[k]


def critical_set(L: LogLinForm, budget: Optional[PrecisionBudget] = None) -> CriticalSet:
    cache = CriticalCache(L, budget)
    signs = tuple(cache.sign(k) for k in range(len(cache.intervals)))
    return CriticalSet(cache.g, cache.intervals, signs, tuple(s == 0 for s in signs))


# -- exact zero detection ----------------------------------------------------


def _coprime_basis(values: list[int]) -> list[int]:
    """Pairwise coprime integers > 1 over which every input factors."""
    basis: list[int] = []
    for v in values:
        stack = [abs(v)]
        while stack:
            x = stack.pop()
            if x == 1:
                continue
            for i, b in enumerate(basis):
                g = gcd(x, b)
                if g > 1:
                    basis.pop(i)
                    if b // g > 1:
                        stack.append(b // g)
                    stack.append(g)
                    if x // g > 1:
                        stack.append(x // g)
                    break
            else:
                basis.append(x)
    return basis


def product_power_is_one(pairs: Sequence[tuple[Fraction, int]]) -> bool:
    """Exact test for prod |v_i|^{e_i} == 1 without forming large powers."""
    items: list[tuple[int, int]] = []
    for v, e in pairs:
        if v == 0:
            raise ValueError("zero factor")
        items.append((abs(v.numerator), e))
        items.append((v.denominator, -e))
    values = [x for x, _ in items if x != 1]
    basis = _coprime_basis(values)
    totals = {b: 0 for b in basis}
    for x, e in items:
        if x == 1:
            continue
        for b in basis:
            while x % b == 0:
                x //= b
                totals[b] += e
        if x != 1:
            raise InternalError("coprime basis does not refine a factor")
    return all(t == 0 for t in totals.values())


def _qpoly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    inv = 1 / b[-1]
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] * inv
        off = len(a) - len(b)
        for i, c in enumerate(b):
            a[off + i] -= f * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _qpoly_mulmod(a: list[Fraction], b: list[Fraction], mod: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qpoly_rem(out, mod)


def _qpoly_powmod(base: list[Fraction], e: int, mod: list[Fraction]) -> list[Fraction]:
    result = [Fraction(1)]
    base = _qpoly_rem(base[:], mod)
    while e:
        if e & 1:
            result = _qpoly_mulmod(result, base, mod)
        e >>= 1
        if e:
            base = _qpoly_mulmod(base, base, mod)
    return result


def _refine_until_signs_known(L: LogLinForm, q: IntPoly, j: IsolatingInterval) -> tuple[IsolatingInterval, list[int]]:
    """Shrink j until every log argument has constant sign on it."""
    while True:
        signs = []
        ok = True
        for _, g1, g0 in L.terms:
            s_lo = g1 * j.lo + g0
            s_hi = g1 * j.hi + g0
            if s_lo > 0 and s_hi > 0:
                signs.append(1)
            elif s_lo < 0 and s_hi < 0:
                signs.append(-1)
            else:
                ok = False
                break
        if ok:
            return j, signs
        j = refine(q, j, j.width() / 4)


def exact_zero_test(L: LogLinForm, j: IsolatingInterval) -> bool:
    """Whether L vanishes exactly at the critical point isolated by j.

    Writes the condition as N(u) = eps * D(u) with N, D products of the
    linear arguments raised to the positive / negative coefficients and eps
    the (exactly computable) sign of the full product at the root, then
    decides it modulo the square-free part of the critical polynomial by
    binary exponentiation; no power of degree max|b| is ever expanded.
    """
    q = squarefree_part(critical_poly(L))
    if degree(q) < 1 or sign_at(q, j.lo) * sign_at(q, j.hi) >= 0:
        raise NotACriticalPoint("interval does not isolate a root of the critical polynomial")
    j, arg_signs = _refine_until_signs_known(L, q, j)
    eps = 1
    for (b, _, _), s in zip(L.terms, arg_signs):
        if b % 2 != 0 and s < 0:
            eps = -eps
    qf = [Fraction(c) for c in q]
    num = [Fraction(1)]
    den = [Fraction(1)]
    for b, g1, g0 in L.terms:
        lin = [g0, g1]
        if b > 0:
            num = _qpoly_mulmod(num, _qpoly_powmod(lin, b, qf), qf)
        else:
            den = _qpoly_mulmod(den, _qpoly_powmod(lin, -b, qf), qf)
    w = num[:]
    if eps == 1:
        pad = max(len(w), len(den))
        w = [a - b2 for a, b2 in zip(w + [Fraction(0)] * (pad - len(w)), den + [Fraction(0)] * (pad - len(den)))]
    else:
        pad = max(len(w), len(den))
        w = [a + b2 for a, b2 in zip(w + [Fraction(0)] * (pad - len(w)), den + [Fraction(0)] * (pad - len(den)))]
    while w and w[-1] == 0:
        w.pop()
    if not w:
        return True
    # gcd(w, q) catches the case where only some roots of q satisfy the relation
    a, b2 = qf[:], w[:]
    while b2:
        a, b2 = b2, _qpoly_rem(a, b2)
    if len(a) <= 1:
        return False
    lo = sum(c * Fraction(j.lo) ** i for i, c in enumerate(a))
    hi = sum(c * Fraction(j.hi) ** i for i, c in enumerate(a))
    return lo * hi < 0


# -- adaptive sign determination ---------------------------------------------


def _eval_L_ball(L: LogLinForm, lo: Fraction, hi: Fraction, prec: int) -> Optional[Ball]:
    """Enclosure of L over [lo, hi], or None if an argument straddles zero."""
    total_b = sum(abs(b) for b, _, _ in L.terms)
    work = prec + total_b.bit_length() + 8
    mid = (lo + hi) / 2
    u = Ball.from_fraction(mid, work) + Ball(Dyadic(0, 0), frac_to_dyadic_up((hi - lo) / 2, 12))
    acc = Ball.from_int(0)
    for b, g1, g0 in L.terms:
        v = Ball.from_fraction(g1, work) * u + Ball.from_fraction(g0, work)
        v = v.round(work)
        s = v.sign()
        if s == 0:
            return None
        if s < 0:
            v = -v
        acc = acc + log_of_ball(v, work).mul_int(b)
    return acc


def sign_at_critical_point(
    L: LogLinForm, j: IsolatingInterval, budget: Optional[PrecisionBudget] = None
) -> int:
    """Certified sign of L at the critical point isolated by j (0 iff exact zero)."""
    budget = budget or precision_budget(L)
    q = squarefree_part(critical_poly(L))
    if degree(q) < 1 or sign_at(q, j.lo) * sign_at(q, j.hi) >= 0:
        raise NotACriticalPoint("interval does not isolate a root of the critical polynomial")
    prec = 64
    tried_exact = False
    while True:
        _check_cap(prec, budget)
        j = refine(q, j, Fraction(1, 1 << prec))
        val = _eval_L_ball(L, j.lo, j.hi, prec)
        if val is not None:
            s = val.sign()
            if s != 0:
                return s
        if not tried_exact and prec >= 512:
            if exact_zero_test(L, j):
                return 0
            tried_exact = True
        prec *= 2


def sign_at_rational(
    L: LogLinForm, w: Fraction, budget: Optional[PrecisionBudget] = None
) -> int:
    """Certified sign of L(w) at a rational non-pole point (0 iff exactly zero)."""
    budget = budget or precision_budget(L)
    w = Fraction(w)
    values = []
    for b, g1, g0 in L.terms:
        v = g1 * w + g0
        if v == 0:
            raise NotAPole(f"L has a pole at {w}")
        values.append((v, b))
    if product_power_is_one(values):
        return 0
    return _sign_of_log_combination(values, budget)


def _sign_of_log_combination(
    values: Sequence[tuple[Fraction, int]], budget: PrecisionBudget
) -> int:
    """Sign of sum e_i log|v_i|, known to be nonzero."""
    total = sum(abs(e) for _, e in values)
    prec = 64
    while True:
        _check_cap(prec, budget)
        work = prec + total.bit_length() + 4
        acc = Ball.from_int(0)
        for v, e in values:
            acc = acc + log_ball(abs(v), work).mul_int(e)
        s = acc.sign()
        if s != 0:
            return s
        prec *= 2


def endpoint_limit_sign(
    L: LogLinForm,
    endpoint,
    side: str = "left",
    budget: Optional[PrecisionBudget] = None,
) -> int:
    """Sign of the one-sided limit of L at a pole or at +-infinity.

    At a finite pole the term that vanishes dominates with -sign(b_i). At
    +-infinity the slope sum c = sum of b_i over terms with g_{i,1} != 0
    gives sign(c), and when c = 0 the limit is the constant
    sum b_i log|g_{i,1}| + sum b_i log|g_{i,0}| whose sign (or exact
    vanishing) is decided like any rational log combination.
    """
    budget = budget or precision_budget(L)
    if endpoint in (math.inf, -math.inf) or endpoint is None:
        c = sum(b for b, g1, _ in L.terms if g1 != 0)
        if c != 0:
            return 1 if c > 0 else -1
        values = []
        for b, g1, g0 in L.terms:
            values.append((g1 if g1 != 0 else g0, b))
        if product_power_is_one(values):
            return 0
        return _sign_of_log_combination(values, budget)
    w = Fraction(endpoint)
    i = pole_term_index(L, w)
    if i is None:
        raise NotAPole(f"{w} is not a pole of L")
    b = L.terms[i][0]
    return -1 if b > 0 else 1


def _endpoint_sign(L, budget, w, is_left: bool) -> int:
    if w is None:
        return endpoint_limit_sign(L, -math.inf if is_left else math.inf, budget=budget)
    i = pole_term_index(L, w)
    if i is not None:
        b = L.terms[i][0]
        return -1 if b > 0 else 1
    return sign_at_rational(L, w, budget)


def _interior_criticals(
    q: IntPoly,
    intervals: Sequence[IsolatingInterval],
    lo: Optional[Fraction],
    hi: Optional[Fraction],
) -> list[int]:
    """Indices of the critical points strictly inside (lo, hi)."""
    boundary_hits = set()
    for w in (lo, hi):
        if w is not None and eval_at(q, w) == 0:
            for k, iv in enumerate(intervals):
                if iv.lo < w < iv.hi:
                    boundary_hits.add(k)
    out = []
    refined = list(intervals)
    for k, iv in enumerate(refined):
        if k in boundary_hits:
            continue
        while True:
            if lo is not None and iv.hi <= lo:
                break
            if hi is not None and iv.lo >= hi:
                break
            if (lo is None or lo < iv.lo) and (hi is None or iv.hi < hi):
                out.append(k)
                break
            iv = refine(q, iv, iv.width() / 4)
            refined[k] = iv
    return out


def count_roots_in_interval(
    L: LogLinForm,
    lo: Optional[Fraction],
    hi: Optional[Fraction],
    budget: Optional[PrecisionBudget] = None,
    cache: Optional[CriticalCache] = None,
) -> tuple[int, int]:
    """(sign changes, exact-zero critical values) of L on the open cell (lo, hi).

    The cell interior must be free of poles and of zeros of the linear
    arguments; endpoints may be poles, ordinary points, or None for an
    unbounded side. The total number of roots of L in the cell is the sum
    of the two counts.
    """
    if cache is None:
        cache = CriticalCache(L, budget)
    budget = cache.budget
    inside = _interior_criticals(cache.q, cache.intervals, lo, hi)
    seq = [_endpoint_sign(L, budget, lo, True)]
    seq.extend(cache.sign(k) for k in inside)
    seq.append(_endpoint_sign(L, budget, hi, False))
    changes = sum(1 for a, b in zip(seq, seq[1:]) if a * b < 0)
    degenerate = sum(1 for k in inside if cache.sign(k) == 0)
    return changes, degenerate
