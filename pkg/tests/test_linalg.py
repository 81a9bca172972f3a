import math
import random
from fractions import Fraction

import pytest

from _oracles import naive_rank_mod2, naive_rref
from circuitroots import linalg as la
from circuitroots.errors import RankError


def frac_eye(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul_frac(a, b):
    return [
        [sum(Fraction(a[i][k]) * Fraction(b[k][j]) for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


class TestRref:
    def test_identity(self):
        r, t = la.rref([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert r == frac_eye(3)
        assert t == frac_eye(3)

    def test_rank_one(self):
        r, _ = la.rref([[2, 4], [1, 2]])
        assert r == [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(0)]]

    def test_transform_identity(self):
        rng = random.Random(3)
        for _ in range(40):
            m = [[rng.randint(-50, 50) for _ in range(7)] for _ in range(5)]
            r, t = la.rref(m)
            assert mat_mul_frac(t, m) == r

    def test_against_naive_oracle(self):
        rng = random.Random(5)
        for _ in range(60):
            m = [[rng.randint(-50, 50) for _ in range(7)] for _ in range(5)]
            assert la.rref(m)[0] == naive_rref(m)

    def test_idempotent(self):
        rng = random.Random(9)
        for _ in range(20):
            m = [[rng.randint(-9, 9) for _ in range(5)] for _ in range(4)]
            r, _ = la.rref(m)
            assert la.rref(r)[0] == r


class TestHermite:
    def test_identity(self):
        u, r = la.hermite([[1, 0], [0, 1]])
        assert u == [[1, 0], [0, 1]] and r == [[1, 0], [0, 1]]

    def test_gcd_column(self):
        _, r = la.hermite([[4], [6]])
        assert r[0][0] == 2 and r[1][0] == 0

    def test_random_invariants(self):
        rng = random.Random(17)
        for _ in range(60):
            m = [[rng.randint(-30, 30) for _ in range(4)] for _ in range(4)]
            u, r = la.hermite(m)
            assert la.mat_mul_int(u, m) == r
            assert abs(la.det_int(u)) == 1
            for i in range(4):
                for j in range(i):
                    assert r[i][j] == 0
            # positive leading entries
            for row in r:
                lead = next((x for x in row if x != 0), None)
                if lead is not None:
                    assert lead > 0


class TestSmith:
    def test_identity(self):
        st = la.smith([[1, 0], [0, 1]])
        assert st.s == [[1, 0], [0, 1]]

    def test_divisibility_forced(self):
        st = la.smith([[2, 0], [0, 3]])
        assert st.diagonal() == [1, 6]

    def test_random_invariants(self):
        rng = random.Random(23)
        for _ in range(80):
            n, t = rng.randint(1, 5), rng.randint(1, 5)
            m = [[rng.randint(-20, 20) for _ in range(t)] for _ in range(n)]
            st = la.smith(m)
            assert la.mat_mul_int(la.mat_mul_int(st.u, m), st.v) == st.s
            assert abs(la.det_int(st.u)) == 1
            assert abs(la.det_int(st.v)) == 1
            d = st.diagonal()
            assert all(x >= 0 for x in d)
            for a, b in zip(d, d[1:]):
                assert (a == 0 and b == 0) or (a != 0 and b % a == 0)

    def test_minor_gcd_consistency(self):
        # s_1 ... s_k equals the gcd of all k x k minors, checked by brute force
        from itertools import combinations

        rng = random.Random(29)
        for _ in range(25):
            n = rng.randint(2, 4)
            m = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
            st = la.smith(m)
            d = st.diagonal()
            for k in range(1, n + 1):
                g = 0
                for rows in combinations(range(n), k):
                    for cols in combinations(range(n), k):
                        g = math.gcd(g, la.det_int([[m[i][j] for j in cols] for i in rows]))
                prod = 1
                for x in d[:k]:
                    prod *= x
                assert prod == g, (m, d, k, g)


class TestKernel:
    def test_one_dim_circuit(self):
        assert la.primitive_right_kernel([[1, 1, 1], [0, 1, 2]]) == [1, -2, 1]

    def test_example_13_relation(self):
        from _oracles import EX13_SUPPORT

        hat = [[1] * 7] + [[p[i] for p in EX13_SUPPORT] for i in range(5)]
        b = la.primitive_right_kernel(hat)
        assert b in ([2, -2, 2, -2, 2, -1, -1], [-2, 2, -2, 2, -2, 1, 1])

    def test_random_full_rank(self):
        rng = random.Random(31)
        for _ in range(60):
            while True:
                m = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
                if la.rank(m) == 3:
                    break
            b = la.primitive_right_kernel(m)
            assert all(sum(row[j] * b[j] for j in range(4)) == 0 for row in m)
            assert math.gcd(*[abs(x) for x in b]) == 1
            assert next(x for x in b if x != 0) > 0

    def test_rank_error(self):
        with pytest.raises(RankError):
            la.primitive_right_kernel([[1, 2, 3], [2, 4, 6]])

    def test_height_bound(self):
        # |b_j| <= n^(n/2) * prod d_i with n the number of rows
        rng = random.Random(37)
        for _ in range(60):
            while True:
                m = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
                if la.rank(m) == 3:
                    break
            b = la.primitive_right_kernel(m)
            ds = [max(1, max(abs(x) for x in row)) for row in m]
            bound = 3 ** Fraction(3, 2)
            prod = 1
            for d in ds:
                prod *= d
            assert all(Fraction(abs(x)) ** 2 <= Fraction(27) * prod**2 for x in b)


class TestRankMod2:
    def test_identity(self):
        assert la.rank_mod2([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3

    def test_all_even(self):
        assert la.rank_mod2([[2, 4], [6, 8]]) == 0

    def test_against_naive(self):
        rng = random.Random(41)
        for _ in range(80):
            m = [[rng.randint(-20, 20) for _ in range(6)] for _ in range(6)]
            assert la.rank_mod2(m) == naive_rank_mod2(m)
            assert la.rank_mod2(m) <= la.rank(m)


class TestHeight:
    def test_zero(self):
        assert la.height(Fraction(0)).to_fraction() == 0

    def test_three_halves(self):
        h = la.height(Fraction(3, 2)).to_fraction()
        assert abs(float(h) - math.log(3)) < 1e-8
        assert float(h) >= math.log(3) - 1e-12  # upper bound

    def test_negative(self):
        h = la.height(Fraction(-7, 5)).to_fraction()
        assert abs(float(h) - math.log(7)) < 1e-8
