"""Dyadic ball arithmetic with a certified natural logarithm.

Numbers are represented as balls [mid - rad, mid + rad] whose midpoint and
radius are exact dyadic rationals, so +, -, * and integer scaling can be
carried out exactly; rounding enters only through the explicit ``round``
method, which shrinks the midpoint mantissa and absorbs the discarded part
into the radius. Every operation is outward rounded: the result ball
contains every exact value obtainable from points of the operand balls.

The logarithm reduces its argument to [sqrt(2)/2, sqrt(2)), evaluates the
atanh series there in ball arithmetic, and adds an explicit tail bound, so
the returned ball provably contains log x with radius at most 2**-prec.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalError

__all__ = [
    "Dyadic",
    "Ball",
    "dyadic",
    "frac_to_dyadic_down",
    "frac_to_dyadic_up",
    "log_ball",
    "log_of_ball",
    "log2_ball",
    "ball_sign",
]


@dataclass(frozen=True, slots=True)
class Dyadic:
    """Exact dyadic rational man * 2**exp, with man odd or zero."""

    man: int
    exp: int

    def __add__(self, other: "Dyadic") -> "Dyadic":
        if self.man == 0:
            return other
        if other.man == 0:
            return self
        e = min(self.exp, other.exp)
        return dyadic((self.man << (self.exp - e)) + (other.man << (other.exp - e)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.man, self.exp)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.man), self.exp)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return dyadic(self.man * other.man, self.exp + other.exp)

    def mul_int(self, k: int) -> "Dyadic":
        return dyadic(self.man * k, self.exp)

    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def is_zero(self) -> bool:
        return self.man == 0

    def _cmp(self, other: "Dyadic") -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    def bit_size(self) -> int:
        return abs(self.man).bit_length()

    def round_to(self, bits: int, mode: str = "nearest") -> "Dyadic":
        """Keep at most ``bits`` mantissa bits; mode in {floor, ceil, nearest}."""
        bl = abs(self.man).bit_length()
        if bl <= bits:
            return self
        shift = bl - bits
        if mode == "floor":
            m = self.man >> shift
        elif mode == "ceil":
            m = -((-self.man) >> shift)
        else:
            m = (self.man + (1 << (shift - 1))) >> shift
        return dyadic(m, self.exp + shift)

    def __repr__(self):
        return f"Dyadic({self.man}*2^{self.exp})"


def dyadic(man: int, exp: int = 0) -> Dyadic:
    """Canonical dyadic: strip trailing zero bits so equality is structural."""
    if man == 0:
        return Dyadic(0, 0)
    s = (man & -man).bit_length() - 1
    return Dyadic(man >> s, exp + s)


D_ZERO = dyadic(0)
D_ONE = dyadic(1)


def frac_to_dyadic_down(x: Fraction, bits: int) -> Dyadic:
    """Largest dyadic <= x whose mantissa has about ``bits`` bits."""
    if x == 0:
        return D_ZERO
    p, q = x.numerator, x.denominator
    k = bits - (abs(p).bit_length() - q.bit_length())
    if k >= 0:
        m = (p << k) // q
    else:
        m = p // (q << -k)
    return dyadic(m, -k)


def frac_to_dyadic_up(x: Fraction, bits: int) -> Dyadic:
    return -frac_to_dyadic_down(-x, bits)


_RAD_BITS = 12  # radii only need a couple of significant bits


@dataclass(frozen=True, slots=True)
class Ball:
    """Closed interval [mid - rad, mid + rad] with dyadic endpoints data."""

    mid: Dyadic
    rad: Dyadic

    @staticmethod
    def exact(d: Dyadic) -> "Ball":
        return Ball(d, D_ZERO)

    @staticmethod
    def from_int(k: int) -> "Ball":
        return Ball(dyadic(k), D_ZERO)

    @staticmethod
    def from_fraction(x: Fraction, abs_err_bits: int) -> "Ball":
        """Ball containing x with radius <= 2**-abs_err_bits."""
        if x.denominator == 1:
            return Ball(dyadic(x.numerator), D_ZERO)
        k = abs_err_bits + 1
        m = (x.numerator << k) // x.denominator  # floor
        return Ball(dyadic(2 * m + 1, -k - 1), Dyadic(1, -k - 1))

    def __add__(self, other: "Ball") -> "Ball":
        return Ball(self.mid + other.mid, self.rad + other.rad)

    def __sub__(self, other: "Ball") -> "Ball":
        return Ball(self.mid - other.mid, self.rad + other.rad)

    def __neg__(self) -> "Ball":
        return Ball(-self.mid, self.rad)

    def __mul__(self, other: "Ball") -> "Ball":
        # |xy - cc'| <= |c|r' + |c'|r + rr' for x in self, y in other
        mid = self.mid * other.mid
        rad = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return Ball(mid, rad)

    def mul_int(self, k: int) -> "Ball":
        return Ball(self.mid.mul_int(k), self.rad.mul_int(abs(k)))

    def div_int(self, k: int, bits: int) -> "Ball":
        """Divide by a nonzero integer, rounding outward at ``bits``."""
        if k < 0:
            return (-self).div_int(-k, bits)
        mid = Ball.from_fraction(Fraction(self.mid.to_fraction(), k), bits)
        rad = frac_to_dyadic_up(Fraction(self.rad.to_fraction(), k), _RAD_BITS)
        return Ball(mid.mid, mid.rad + rad)

    def round(self, bits: int) -> "Ball":
        """Shrink the midpoint mantissa to ``bits``, growing the radius."""
        m = self.mid.round_to(bits, "nearest")
        err = abs(self.mid - m)
        return Ball(m, (self.rad + err).round_to(_RAD_BITS, "ceil"))

    def sign(self) -> int:
        """+1 / -1 when the ball excludes zero, else 0 (zero-straddling)."""
        if (self.mid - self.rad).sign() > 0:
            return 1
        if (self.mid + self.rad).sign() < 0:
            return -1
        return 0

    def lower(self) -> Dyadic:
        return self.mid - self.rad

    def upper(self) -> Dyadic:
        return self.mid + self.rad

    def hi_abs(self) -> Dyadic:
        return abs(self.mid) + self.rad

    def contains(self, x: Fraction) -> bool:
        lo = self.lower().to_fraction()
        hi = self.upper().to_fraction()
        return lo <= x <= hi


def ball_sign(b: Ball) -> int:
    return b.sign()


def _atanh_series(z: Fraction, err_bits: int) -> Ball:
    """Ball enclosure of atanh(z) for |z| <= 0.34, radius <= 2**-err_bits."""
    w = err_bits + 16
    while True:
        zb = Ball.from_fraction(z, w + 8)
        z2 = (zb * zb).round(w)
        acc = zb
        t = zb
        j = 1
        z2_hi = z2.hi_abs()
        # 1/(1 - z^2) <= 8/7 for |z| <= 0.34
        while True:
            t = (t * z2).round(w)
            acc = (acc + t.div_int(2 * j + 1, w)).round(w + 8)
            tail = (t.hi_abs() * z2_hi).mul_int(2)  # crude 8/7 < 2 slack
            # tail bound: |z|^(2j+3)/((2j+3)(1-z^2)) <= t_hi * z2_hi * 2 / (2j+3)
            tail = frac_to_dyadic_up(Fraction(tail.to_fraction(), 2 * j + 3), _RAD_BITS)
            if tail <= Dyadic(1, -w):
                acc = Ball(acc.mid, (acc.rad + tail).round_to(_RAD_BITS, "ceil"))
                break
            j += 1
        if acc.rad <= Dyadic(1, -err_bits):
            return acc
        w += 32  # belt and braces; the first pass already meets the contract


_LOG2_CACHE: dict[int, Ball] = {}


def log2_ball(err_bits: int) -> Ball:
    """Enclosure of log 2 with radius <= 2**-err_bits."""
    key = 1 << max(6, (err_bits - 1).bit_length())
    cached = _LOG2_CACHE.get(key)
    if cached is None or cached.rad > Dyadic(1, -err_bits):
        cached = _atanh_series(Fraction(1, 3), key + 2).mul_int(2)
        _LOG2_CACHE[key] = cached
    return cached


def _scaling_exponent(p: int, q: int) -> int:
    """The k with sqrt(2)/2 <= (p/q)/2^k < sqrt(2), i.e. 2^(2k-1) <= x^2 < 2^(2k+1)."""
    k = p.bit_length() - q.bit_length()
    p2, q2 = p * p, q * q
    for cand in (k - 1, k, k + 1):
        e = 2 * cand - 1
        lo_ok = p2 >= (q2 << e) if e >= 0 else (p2 << -e) >= q2
        e = 2 * cand + 1
        hi_ok = p2 < (q2 << e) if e >= 0 else (p2 << -e) < q2
        if lo_ok and hi_ok:
            return cand
    raise InternalError("dyadic scaling exponent not found")


def log_ball(x: Fraction, abs_err_bits: int) -> Ball:
    """Certified enclosure of log x for a positive rational x.

    The returned ball contains log x and has radius <= 2**-abs_err_bits.
    """
    if abs_err_bits < 1:
        abs_err_bits = 1
    x = Fraction(x)
    if x <= 0:
        raise DomainError("log of a non-positive number")
    if x == 1:
        return Ball.exact(D_ZERO)
    p, q = x.numerator, x.denominator
    k = _scaling_exponent(p, q)
    # z = (x - 2^k) / (x + 2^k), |z| <= 3 - 2*sqrt(2) < 0.1716
    if k >= 0:
        num, den = p - (q << k), p + (q << k)
    else:
        num, den = (p << -k) - q, (p << -k) + q
    z = Fraction(num, den)
    res = _atanh_series(z, abs_err_bits + 2).mul_int(2)
    if k != 0:
        lb = log2_ball(abs_err_bits + 2 + abs(k).bit_length())
        res = res + lb.mul_int(k)
    if res.rad > Dyadic(1, -abs_err_bits):
        raise InternalError("log_ball radius contract violated")
    return res


def log_of_ball(b: Ball, abs_err_bits: int) -> Ball:
    """Enclosure of {log t : t in b}; b must be strictly positive.

    Uses log(mid) plus the mean-value bound rad/(mid - rad) for the spread.
    """
    lo = b.lower().to_fraction()
    if lo <= 0:
        raise DomainError("log of a ball touching zero")
    base = log_ball(b.mid.to_fraction(), abs_err_bits + 1)
    if b.rad.is_zero():
        return base
    spread = frac_to_dyadic_up(b.rad.to_fraction() / lo, _RAD_BITS)
    return Ball(base.mid, base.rad + spread)
