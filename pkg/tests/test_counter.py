import random
from fractions import Fraction

import pytest

from _oracles import (
    affine_section5_system,
    example_13_system,
    example_216_system,
    random_generic_circuit_system,
    random_trinomial,
    refusal_23_system,
)
from circuitroots.counter import (
    PolySystem,
    count_affine,
    count_positive,
    count_positive_ex,
    count_torus,
    count_torus_ex,
    orthant_selector,
)
from circuitroots.errors import HyperplaneSupport
from circuitroots.gale import Support

F = Fraction


class TestValidation:
    def test_zero_row_rejected(self):
        with pytest.raises(ValueError):
            PolySystem(Support(((0,), (1,), (2,))), ((0, 0, 0),))

    def test_zero_column_rejected(self):
        with pytest.raises(ValueError):
            PolySystem(
                Support(((0, 0), (1, 0), (0, 1), (1, 1))),
                ((1, 0, 1, 0), (1, 0, 0, 1)),
            )

    def test_unsupported_size(self):
        with pytest.raises(ValueError):
            PolySystem(Support(((0,), (1,), (2,), (3,))), ((1, 1, 1, 1),))


class TestPositive:
    def test_example_13_published_counts(self):
        for denom, expected in [(14392, 6), (13058, 0)]:
            res = count_positive(example_13_system(denom))
            assert res.kind == "finite" and res.count == expected

    def test_refusal(self):
        res = count_positive(refusal_23_system())
        assert res.kind == "genericity_failure"
        assert res.detail

    def test_trinomial_vs_isolation(self):
        from circuitroots.verify import direct_univariate_counts

        rng = random.Random(101)
        done = 0
        while done < 60:
            system = random_trinomial(rng)
            res = count_positive(system)
            if res.kind == "genericity_failure":
                continue
            npos, _ = direct_univariate_counts(system)
            assert res.count == npos, (system, res, npos)
            done += 1

    def test_n_plus_1_zero_or_one(self):
        rng = random.Random(7)
        counts = set()
        done = 0
        while done < 60:
            n = rng.randint(1, 3)
            pts = set()
            while len(pts) < n + 1:
                pts.add(tuple(rng.randint(0, 6) for _ in range(n)))
            pts = tuple(sorted(pts))
            coeffs = tuple(tuple(rng.randint(-9, 9) for _ in range(n + 1)) for _ in range(n))
            try:
                system = PolySystem(Support(pts), coeffs)
                res = count_positive(system)
            except (ValueError, HyperplaneSupport):
                continue
            if res.kind == "finite":
                counts.add(res.count)
                assert res.count in (0, 1)
                done += 1
        assert counts == {0, 1}

    def test_n_plus_1_negative_target(self):
        # x - y = 0, x + y + 1 = 0 forces a negative monomial value
        system = PolySystem(
            Support(((1, 0), (0, 1), (0, 0))),
            ((1, -1, 0), (1, 1, 1)),
        )
        res = count_positive(system)
        assert res.kind == "finite" and res.count == 0


class TestTorus:
    def test_example_216(self):
        res = count_torus(example_216_system())
        assert res.kind == "finite" and res.count == 2

    def test_example_216_eligible_cells(self):
        res, details = count_torus_ex(example_216_system())
        eligible = [(c["lo"], c["hi"]) for c in details["cells"] if c["eligible"]]
        assert eligible == [
            (F(0), F(20845, 114296)),
            (F(42139, 126754), F(47210, 125680)),
            (F(47210, 125680), F(39898, 84556)),
        ]

    def test_example_13_torus_equals_positive(self):
        res = count_torus(example_13_system(14392))
        assert res.kind == "finite" and res.count == 6

    def test_torus_at_least_positive(self):
        rng = random.Random(23)
        for _ in range(25):
            system = random_generic_circuit_system(rng, rng.randint(1, 3), 6, 10)
            pos = count_positive(system)
            tor = count_torus(system)
            if pos.kind == "finite" and tor.kind == "finite":
                assert tor.count >= pos.count

    def test_trinomial_vs_isolation(self):
        from circuitroots.verify import direct_univariate_counts

        rng = random.Random(303)
        done = 0
        while done < 60:
            system = random_trinomial(rng)
            res = count_torus(system)
            if res.kind == "genericity_failure":
                continue
            _, ntor = direct_univariate_counts(system)
            assert res.count == ntor, (system, res, ntor)
            done += 1


class TestOrthantSelector:
    def test_example_216_full_rank(self):
        from circuitroots.counter import _canonical_frame
        from circuitroots.gale import reduce_to_gale

        frame = _canonical_frame(example_216_system())
        gs = reduce_to_gale(frame.support, frame.coeffs, frame.cd, require_positive_form=False)
        sel = orthant_selector(gs, frame.support)
        assert sel.r == 4  # full mod-2 rank: Gamma' conditions vacuous
        assert sel.b_parities == (1, 0, 1, 1)  # rows 1, 3, 4 appear in Lambda

    def test_even_diagonal(self):
        from circuitroots.gale import GaleSystem

        gs = GaleSystem(
            n=2, m=2,
            gammas=((F(1), F(1)), (F(1), F(2))),
            relation=(1, 1, 1, -3),
            interval=None, height_budget_log=0.0,
        )
        support = Support(((2, 0), (0, 2), (1, 0), (0, 0)))
        sel = orthant_selector(gs, support)
        assert sel.r == 0


class TestAffine:
    def test_section5_infinite(self):
        res = count_affine(affine_section5_system())
        assert res.kind == "infinite"

    def test_all_negative_minima_reduces_to_torus(self):
        rng = random.Random(31)
        done = 0
        while done < 15:
            system = random_generic_circuit_system(rng, 2, 5, 8)
            mins = [min(p[i] for p in system.support.points) for i in range(2)]
            if not all(m < 0 for m in mins):
                continue
            aff = count_affine(system)
            tor = count_torus(system)
            assert aff.kind == "finite" and aff.count == tor.count
            done += 1

    def test_positive_minimum_infinite(self):
        # x1 divides every equation; n >= 2 so a whole punctured hyperplane
        # consists of roots
        system = PolySystem(
            Support(((1, 0), (1, 1), (2, 0), (1, 2))),
            ((1, 1, 1, 1), (1, 2, 3, 4)),
        )
        res = count_affine(system)
        assert res.kind == "infinite"

    def test_univariate_zero_root(self):
        # x^3 - 3x^2 + x = 0 has the root 0 on top of its torus roots
        system = PolySystem(Support(((1,), (2,), (3,))), ((1, -3, 1),))
        tor = count_torus(system)
        aff = count_affine(system)
        assert aff.count == tor.count + 1

    def test_origin_root_counted(self):
        # supports all strictly positive on axes but origin not in A:
        # x1 + x2 type equations vanish at the origin
        system = PolySystem(
            Support(((1, 0), (0, 1), (1, 1))),
            ((1, 1, 1), (1, -1, 2)),
        )
        res = count_affine(system)
        assert res.kind in ("finite", "unverified_genericity")
        tor = count_torus(system)
        # the origin is always a root here
        assert res.count == tor.count + 1


class TestInvariance:
    def test_equation_scaling(self):
        rng = random.Random(41)
        for _ in range(10):
            system = random_generic_circuit_system(rng, 2, 5, 8)
            mults = [rng.choice([2, 3, -5]) for _ in system.coeffs]
            scaled = PolySystem(
                system.support,
                tuple(
                    tuple(c * m for c in row)
                    for row, m in zip(system.coeffs, mults)
                ),
            )
            assert count_positive(system) == count_positive(scaled)
            assert count_torus(system) == count_torus(scaled)

    def test_support_translation(self):
        rng = random.Random(43)
        for _ in range(10):
            system = random_generic_circuit_system(rng, 2, 5, 8)
            shift = tuple(rng.randint(-4, 4) for _ in range(2))
            translated = PolySystem(
                Support(
                    tuple(
                        tuple(x + s for x, s in zip(p, shift))
                        for p in system.support.points
                    )
                ),
                system.coeffs,
            )
            assert count_positive(system) == count_positive(translated)
            assert count_torus(system) == count_torus(translated)
