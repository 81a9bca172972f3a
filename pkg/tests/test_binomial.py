import math
import random
from fractions import Fraction

import pytest

from circuitroots.binomial import (
    INFINITE,
    BinomialSystem,
    count_positive_binomial,
    count_torus_binomial,
)
from circuitroots.errors import SingularExponents
from circuitroots.linalg import det_int


class TestPositive:
    def test_square_of_two(self):
        sys = BinomialSystem(((2,),), (Fraction(4),))
        assert count_positive_binomial(sys) == 1

    def test_negative_rhs(self):
        sys = BinomialSystem(((2,),), (Fraction(-1),))
        assert count_positive_binomial(sys) == 0

    def test_rank_deficient(self):
        # x*y = 2 together with x*y = 2 (resp. 3)
        a = ((1, 1), (1, 1))
        assert count_positive_binomial(BinomialSystem(a, (Fraction(2), Fraction(2)))) is INFINITE
        assert count_positive_binomial(BinomialSystem(a, (Fraction(2), Fraction(3)))) == 0

    def test_always_one_when_nonsingular_and_positive(self):
        rng = random.Random(3)
        for _ in range(40):
            n = rng.randint(1, 3)
            while True:
                a = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
                if det_int([list(r) for r in a]) != 0:
                    break
            c = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n))
            assert count_positive_binomial(BinomialSystem(a, c)) == 1


class TestTorus:
    def test_even_exponent(self):
        assert count_torus_binomial(BinomialSystem(((2,),), (Fraction(4),))) == 2
        assert count_torus_binomial(BinomialSystem(((2,),), (Fraction(-4),))) == 0

    def test_mixed_parity(self):
        # x^2 = 4, y^3 = 8: r = 1, roots (+-2, 2)
        sys = BinomialSystem(((2, 0), (0, 3)), (Fraction(4), Fraction(8)))
        assert count_torus_binomial(sys) == 2

    def test_singular_exponents(self):
        with pytest.raises(SingularExponents):
            count_torus_binomial(BinomialSystem(((1, 1), (1, 1)), (Fraction(2), Fraction(2))))

    def test_count_is_zero_or_power_of_two(self):
        from circuitroots.linalg import rank_mod2

        rng = random.Random(5)
        for _ in range(60):
            n = rng.randint(1, 3)
            while True:
                a = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
                if det_int([list(r) for r in a]) != 0:
                    break
            c = tuple(
                Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
                for _ in range(n)
            )
            count = count_torus_binomial(BinomialSystem(a, c))
            r = rank_mod2([list(row) for row in a])
            assert count in (0, 2 ** (n - r))


def brute_force_torus_count(a, c, n):
    """Solve |x|^A = |c| by logarithms, then test all 2^n sign vectors."""
    import itertools

    # log|x| solves A^T y = log|c|; existence is guaranteed (A nonsingular)
    count = 0
    for signs in itertools.product((1, -1), repeat=n):
        ok = True
        for j in range(n):
            s = 1
            for i in range(n):
                if a[i][j] % 2 != 0 and signs[i] < 0:
                    s = -s
            if s != (1 if c[j] > 0 else -1):
                ok = False
                break
        if ok:
            count += 1
    return count


class TestBruteForceEquivalence:
    def test_exhaustive_orthant_solving(self):
        rng = random.Random(11)
        for _ in range(120):
            n = rng.randint(1, 3)
            while True:
                a = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
                if det_int([list(r) for r in a]) != 0:
                    break
            c = tuple(
                Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
                for _ in range(n)
            )
            expected = brute_force_torus_count(a, c, n)
            assert count_torus_binomial(BinomialSystem(a, c)) == expected, (a, c)
