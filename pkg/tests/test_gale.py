import random
from fractions import Fraction

import pytest

from _oracles import (
    EX13_SUPPORT,
    EX216_COEFFS,
    EX216_GAMMAS,
    EX216_SUPPORT,
    example_13_system,
    refusal_23_system,
)
from circuitroots.errors import HyperplaneSupport
from circuitroots.gale import (
    EMPTY_INTERVAL,
    NO_POSITIVE_ROOTS,
    Support,
    check_genericity,
    find_subcircuit,
    interval_I,
    reduce_to_gale,
    reindex_for_torus,
)


class TestFindSubcircuit:
    def test_one_dimensional(self):
        cd = find_subcircuit(Support(((0,), (1,), (2,))))
        assert cd.sigma_indices == (0, 1, 2)
        assert cd.relation in ((1, -2, 1), (-1, 2, -1))
        assert cd.m == 1

    def test_degenerate_circuit_in_r4(self):
        pts = ((0, 0, 0, 0), (1, 0, 0, 0), (2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        cd = find_subcircuit(Support(pts))
        assert cd.sigma_indices == (0, 1, 2)
        assert cd.relation in ((1, -2, 1), (-1, 2, -1))

    def test_example_13(self):
        cd = find_subcircuit(Support(EX13_SUPPORT))
        assert cd.m == 5
        assert cd.sigma_indices == (0, 1, 2, 3, 4, 5, 6)
        assert tuple(abs(x) for x in cd.relation) == (2, 2, 2, 2, 2, 1, 1)

    def test_hyperplane_support(self):
        # all points on the line x1 = x2
        pts = ((0, 0), (1, 1), (2, 2), (3, 3))
        with pytest.raises(HyperplaneSupport):
            find_subcircuit(Support(pts))


class TestReindex:
    def test_identity_when_compliant(self):
        sup = Support(EX216_SUPPORT)
        cd = find_subcircuit(sup)
        sup2, cd2, perm = reindex_for_torus(sup, cd)
        assert perm == (0, 1, 2, 3, 4, 5)
        assert sup2.points[-1] == (0, 0, 0, 0)
        assert cd2.relation[-2] % 2 == 1
        assert cd2.relation[-1] > 0

    def test_even_second_to_last_entry(self):
        sup = Support(((0,), (1,), (2,)))
        cd = find_subcircuit(sup)
        # relation (1, -2, 1): the entry before last is even, so position n+1
        # gets the lowest-index odd entry
        sup2, cd2, perm = reindex_for_torus(sup, cd)
        assert cd2.relation[-2] % 2 == 1
        assert cd2.relation[-1] > 0
        assert perm == (1, 0, 2)

    def test_odd_second_to_last_entry(self):
        # relation of {0, 2, 3} is (1, -3, 2) -> reindex must move an odd entry
        sup = Support(((0,), (2,), (3,)))
        cd = find_subcircuit(sup)
        sup2, cd2, perm = reindex_for_torus(sup, cd)
        assert cd2.relation[-2] % 2 == 1
        assert sup2.points[-1] == (0,)

    def test_translation_moves_origin(self):
        sup = Support(((3, 1), (5, 2), (4, 4), (7, 1)))
        cd = find_subcircuit(sup)
        sup2, cd2, _ = reindex_for_torus(sup, cd)
        assert sup2.points[-1] == (0, 0)
        # relation still annihilates the translated hat matrix
        hat = sup2.hat_matrix()
        full = [0] * sup2.t
        for k, j in enumerate(cd2.sigma_indices):
            full[j] = cd2.relation[k]
        for row in hat:
            assert sum(x * b for x, b in zip(row, full)) == 0


class TestGenericity:
    def test_simple_pass(self):
        coeffs = [
            [1, 0, 0, 1, 1],
            [0, 1, 0, 2, 1],
            [0, 0, 1, 3, 1],
        ]
        assert check_genericity(coeffs).passed

    def test_paper_refusal_matrix(self):
        # the section 2.3 example in the paper's own column order
        coeffs = [
            [1, 0, 0, 0, -1],
            [0, 1, 0, -1, -1],
            [0, 0, 1, -1, -1],
        ]
        rep = check_genericity(coeffs)
        assert not rep.passed
        assert "2 x 2" in rep.failing_minor

    def test_random_pass_rate(self):
        # failure probability is at most 2 n^2 / (2H+1) = 18/201 for n = 3
        rng = random.Random(7)
        trials, failures = 2000, 0
        for _ in range(trials):
            coeffs = [[rng.randint(-100, 100) for _ in range(5)] for _ in range(3)]
            if not check_genericity(coeffs).passed:
                failures += 1
        assert failures / trials <= 18 / 201 + 3 * (0.09 / trials) ** 0.5


class TestReduce:
    def test_example_13_pattern(self):
        system = example_13_system(14392)
        cd = find_subcircuit(system.support)
        sup2, cd2, perm = reindex_for_torus(system.support, cd)
        coeffs2 = tuple(tuple(row[j] for j in perm) for row in system.coeffs)
        assert check_genericity(coeffs2).passed
        gs = reduce_to_gale(sup2, coeffs2, cd2)
        c = Fraction(1, 14392)
        assert cd2.relation == (-2, 2, -2, 2, -2, 1, 1)
        expected = ((16384 * c, Fraction(1, 4)), (4096 * c, Fraction(1)),
                    (256 * c, Fraction(1)), (16 * c, Fraction(1)), (c, Fraction(1)))
        assert gs.gammas == expected

    def test_example_216_gammas(self):
        sup = Support(EX216_SUPPORT)
        cd = find_subcircuit(sup)
        sup2, cd2, perm = reindex_for_torus(sup, cd)
        coeffs2 = tuple(tuple(row[j] for j in perm) for row in EX216_COEFFS)
        gs = reduce_to_gale(sup2, coeffs2, cd2, require_positive_form=False)
        assert gs.gammas == EX216_GAMMAS
        assert gs.relation == (54667, -16978, -43727, 5123, -10129, 11044)

    def test_no_positive_roots(self):
        # x^2 + x + 1 = 0 reduced form has both gammas negative
        sup = Support(((2,), (1,), (0,)))
        cd = find_subcircuit(sup)
        sup2, cd2, perm = reindex_for_torus(sup, cd)
        coeffs2 = tuple(tuple(row[j] for j in perm) for row in ((1, 1, 1),))
        assert reduce_to_gale(sup2, coeffs2, cd2) is NO_POSITIVE_ROOTS

    def test_row_shuffle_invariance(self):
        rng = random.Random(13)
        system = example_13_system(20730)
        cd = find_subcircuit(system.support)
        sup2, cd2, perm = reindex_for_torus(system.support, cd)
        coeffs2 = [tuple(row[j] for j in perm) for row in system.coeffs]
        gs = reduce_to_gale(sup2, tuple(coeffs2), cd2)
        for _ in range(5):
            rows = coeffs2[:]
            rng.shuffle(rows)
            gs2 = reduce_to_gale(sup2, tuple(rows), cd2)
            assert gs2.gammas == gs.gammas


class TestInterval:
    def _gs(self, gammas):
        from circuitroots.gale import GaleSystem

        return GaleSystem(
            n=len(gammas), m=len(gammas), gammas=tuple(gammas), relation=(),
            interval=None, height_budget_log=0.0,
        )

    def test_all_constant_positive(self):
        gs = self._gs([(Fraction(0), Fraction(2)), (Fraction(0), Fraction(5))])
        assert interval_I(gs) == (Fraction(0), None)

    def test_example_216_restriction(self):
        gs = self._gs(list(EX216_GAMMAS))
        lo, hi = interval_I(gs)
        assert lo == 0
        assert hi == Fraction(20845, 114296)
        assert str(float(hi)).startswith("0.182377")

    def test_empty(self):
        gs = self._gs([(Fraction(1), Fraction(-2)), (Fraction(-1), Fraction(1))])
        assert interval_I(gs) is EMPTY_INTERVAL
