"""Exact univariate integer-polynomial toolkit.

Polynomials are lists of Python ints, constant term first, with a nonzero
leading coefficient (the zero polynomial is the empty list). Real roots are
isolated by Descartes' rule of signs driven by bisection on the square-free
part, entirely in integer arithmetic; refinement is plain bisection with
exact sign evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .ball import Dyadic, frac_to_dyadic_down
from .errors import DegreeTooSmall, NotIsolating, ZeroPolynomial

__all__ = [
    "IsolatingInterval",
    "degree",
    "trim",
    "derivative",
    "eval_at",
    "sign_at",
    "content",
    "primitive",
    "squarefree_part",
    "isolate_real_roots",
    "refine",
    "cauchy_root_bound",
    "root_separation_bound",
]

IntPoly = list[int]


@dataclass(frozen=True)
class IsolatingInterval:
    """Open interval (lo, hi) holding exactly one real root of its polynomial."""

    lo: Fraction
    hi: Fraction

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def trim(f: Sequence[int]) -> IntPoly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence[int]) -> int:
    return len(f) - 1


def derivative(f: Sequence[int]) -> IntPoly:
    return [i * c for i, c in enumerate(f)][1:]


def eval_at(f: Sequence[int], x: Fraction):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def sign_at(f: Sequence[int], x) -> int:
    """Exact sign of f(x) at a rational point."""
    v = eval_at(f, Fraction(x))
    return (v > 0) - (v < 0)


def content(f: Sequence[int]) -> int:
    g = 0
    for c in f:
        g = gcd(g, c)
    return g


def primitive(f: Sequence[int]) -> IntPoly:
    """Divide out the content and make the leading coefficient positive."""
    f = trim(f)
    if not f:
        return []
    g = content(f)
    if f[-1] < 0:
        g = -g
    return [c // g for c in f]


def poly_mul(a: Sequence[int], b: Sequence[int]) -> IntPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _gcd_q(a: Sequence[int], b: Sequence[int]) -> IntPoly:
    """Primitive gcd of two integer polynomials (Euclid over Q)."""
    fa = [Fraction(c) for c in a]
    fb = [Fraction(c) for c in b]
    while fb:
        fa, fb = fb, _rem_q(fa, fb)
    den = 1
    for c in fa:
        den = den * c.denominator // gcd(den, c.denominator)
    return primitive([int(c * den) for c in fa])


def _rem_q(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    inv = 1 / b[-1]
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] * inv
        off = len(a) - len(b)
        for i, c in enumerate(b):
            a[off + i] -= q * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def div_exact(f: Sequence[int], g: Sequence[int]) -> IntPoly:
    """Exact quotient f / g over Q, integer-ized; raises if not exact."""
    fa = [Fraction(c) for c in f]
    out = [Fraction(0)] * (len(f) - len(g) + 1)
    inv = Fraction(1, g[-1])
    for k in range(len(out) - 1, -1, -1):
        q = fa[k + len(g) - 1] * inv
        out[k] = q
        for i, c in enumerate(g):
            fa[k + i] -= q * c
    if any(fa[: len(g) - 1]):
        raise ZeroPolynomial("division not exact")
    if any(c.denominator != 1 for c in out):
        # cannot happen for f / squarefree-gcd by Gauss's lemma
        raise ZeroPolynomial("quotient is not an integer polynomial")
    return trim([int(c) for c in out])


def squarefree_part(f: Sequence[int]) -> IntPoly:
    """Primitive square-free part f / gcd(f, f'), positive leading coefficient."""
    f = trim(f)
    if not f:
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if len(f) == 1:
        return [1]
    g = _gcd_q(f, derivative(f))
    if degree(g) == 0:
        return primitive(f)
    return primitive(div_exact(f, g))


def _taylor_shift(f: IntPoly, a: int) -> IntPoly:
    """Coefficients of f(x + a)."""
    out = []
    cs = list(f)
    for _ in range(len(f)):
        # synthetic division of cs by (x - a); remainder is cs(a)
        rem = 0
        for i in range(len(cs) - 1, -1, -1):
            rem = rem * a + cs[i]
        out.append(rem)
        # quotient coefficients
        q = [0] * (len(cs) - 1)
        acc = 0
        for i in range(len(cs) - 1, 0, -1):
            acc = acc * a + cs[i]
            q[i - 1] = acc
        cs = q
        if not cs:
            break
    return out


def _sign_variations(f: Sequence[int]) -> int:
    v = 0
    prev = 0
    for c in f:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _descartes_count(p: IntPoly, lo: Fraction, hi: Fraction) -> int:
    """Descartes bound on the number of roots of p in the open interval (lo, hi).

    0 and 1 are exact answers; >= 2 means "split further".
    """
    d = degree(p)
    den = lo.denominator * hi.denominator // gcd(lo.denominator, hi.denominator)
    a = int(lo * den)
    b = int(hi * den)
    # q(t) = den^d * p((a + (b-a)t) / den) has the same roots in (0,1)
    cs = [c * den ** (d - i) for i, c in enumerate(p)]
    cs = _taylor_shift(cs, a)
    w = b - a
    pw = 1
    for i in range(len(cs)):
        cs[i] *= pw
        pw *= w
    # roots in (0,1) of q <-> positive roots of (1+t)^d q(1/(1+t))
    cs.reverse()
    cs = _taylor_shift(cs, 1)
    return _sign_variations(cs)


def _purge_root_endpoints(p: IntPoly, lo: Fraction, hi: Fraction):
    """Shrink (lo, hi), known to hold exactly one root of p, until neither
    endpoint is a root. Returns the interval, or the root itself if the
    shrinking happens to land on it."""
    while eval_at(p, lo) == 0 or eval_at(p, hi) == 0:
        mid = (lo + hi) / 2
        if eval_at(p, mid) == 0:
            return mid
        if _descartes_count(p, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return IsolatingInterval(lo, hi)


def cauchy_root_bound(f: Sequence[int]) -> Fraction:
    """1 + max|coeff|: every complex root has absolute value below this."""
    f = trim(f)
    if not f:
        raise ZeroPolynomial("root bound of the zero polynomial")
    return Fraction(1 + max(abs(c) for c in f))


def _isolate_squarefree(p: IntPoly) -> list[IsolatingInterval]:
    d = degree(p)
    if d <= 0:
        return []
    bound = cauchy_root_bound(p)
    k = 1
    while Fraction(1 << k) < bound:
        k += 1
    big = Fraction(1 << k)
    exact_roots: list[Fraction] = []
    found: list[IsolatingInterval] = []
    stack = [(-big, big)]
    while stack:
        lo, hi = stack.pop()
        n = _descartes_count(p, lo, hi)
        if n == 0:
            continue
        if n == 1:
            got = _purge_root_endpoints(p, lo, hi)
            if isinstance(got, IsolatingInterval):
                found.append(got)
            else:
                exact_roots.append(got)
            continue
        mid = (lo + hi) / 2
        if eval_at(p, mid) == 0:
            exact_roots.append(mid)
        stack.append((lo, mid))
        stack.append((mid, hi))
    # wrap exact roots in intervals free of the other roots
    for rho in exact_roots:
        h = Fraction(1, 2)
        while True:
            if (
                eval_at(p, rho - h) != 0
                and eval_at(p, rho + h) != 0
                and _descartes_count(p, rho - h, rho + h) == 1
            ):
                found.append(IsolatingInterval(rho - h, rho + h))
                break
            h /= 2
    found.sort(key=lambda iv: iv.lo)
    # Descartes may hand out an interval whose endpoint is an exact root of a
    # neighbour; shrink until all intervals are pairwise disjoint
    for i in range(len(found) - 1):
        a, b = found[i], found[i + 1]
        while a.hi > b.lo:
            if a.width() >= b.width():
                a = refine(p, a, a.width() / 4)
                found[i] = a
            else:
                b = refine(p, b, b.width() / 4)
                found[i + 1] = b
    return found


def isolate_real_roots(f: Sequence[int]) -> list[IsolatingInterval]:
    """Disjoint open rational intervals, one per distinct real root of f.

    Intervals are sorted ascending and the square-free part of f is nonzero
    at every endpoint.
    """
    f = trim(f)
    if not f:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    return _isolate_squarefree(squarefree_part(f))


def refine(f: Sequence[int], j: IsolatingInterval, width: Fraction) -> IsolatingInterval:
    """Bisect an isolating interval of f down to the requested width."""
    p = squarefree_part(f)
    lo, hi = j.lo, j.hi
    s_lo, s_hi = sign_at(p, lo), sign_at(p, hi)
    if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
        raise NotIsolating("endpoint signs do not bracket a single root")
    width = Fraction(width)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = sign_at(p, mid)
        if s == 0:
            # the root is exactly mid: pick a symmetric interval inside (lo, hi)
            h = min(width, hi - mid, mid - lo) / 2
            return IsolatingInterval(mid - h, mid + h)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(lo, hi)


def root_separation_bound(f: Sequence[int]) -> Dyadic:
    """Positive dyadic below every gap between distinct real roots of f.

    Mahler's bound sqrt(3) * (d+1)^(-(2d+1)/2) * H^(-(d-1)) applied to the
    square-free part.
    """
    f = trim(f)
    if not f:
        raise ZeroPolynomial("separation bound of the zero polynomial")
    if degree(f) < 2:
        raise DegreeTooSmall("need degree >= 2")
    p = squarefree_part(f)
    d = max(degree(p), 2)
    h = max(abs(c) for c in p)
    # sqrt(3) > 17/10 and (d+1)^((2d+1)/2) <= isqrt((d+1)^(2d+1)) + 1
    denom = (isqrt((d + 1) ** (2 * d + 1)) + 1) * h ** (d - 1)
    val = Fraction(17, 10) / denom
    out = frac_to_dyadic_down(val, 30)
    if out.sign() <= 0:
        raise DegreeTooSmall("separation bound underflow")  # unreachable
    return out
