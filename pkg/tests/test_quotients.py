import math
import random
from fractions import Fraction

import pytest

from threefold.linalg import (determinant, identity_matrix, invert_unimodular,
                              matrix_product, smith_normal_form)
from threefold.quotients import (ChartGroup, ChartGroupFactor, LatticeError,
                                 QuotientType, blowup_charts, effective_factors,
                                 reid_tai_is_canonical, reid_tai_is_terminal)


class TestQuotientType:
    def test_parse_and_print(self):
        q = QuotientType.parse("1/14(1,13,11)")
        assert q == QuotientType(14, (1, 13, 11))
        assert str(q) == "1/14(1,13,11)"

    def test_parse_whitespace_and_negatives(self):
        q = QuotientType.parse(" 1 / 14 ( 1, -1, 18 ) ")
        assert q.weights == (1, 13, 4)

    def test_parse_errors(self):
        for bad in ("2/3(1,2)", "1/4", "1/4()", "quotient"):
            with pytest.raises(ValueError):
                QuotientType.parse(bad)

    def test_weights_reduced(self):
        assert QuotientType(14, (143, -1, 25)).weights == (3, 13, 11)

    def test_group_action_bridge(self):
        action = QuotientType(2, (1, 1, 1, 0, 0)).group_action(("a", "b", "c", "d", "e"))
        assert action.character("a") == 1 and action.character("d") == 0


class TestNormalization:
    def test_unit_orbit_example(self):
        # 3 * (2,4,3) = (1,2,4) mod 5, so the two types coincide
        assert (QuotientType(5, (2, 4, 3)).normalized()
                == QuotientType(5, (1, 2, 4)).normalized())

    def test_permutation_example(self):
        assert (QuotientType(14, (13, 1, 11)).normalized()
                == QuotientType(14, (1, 13, 11)).normalized())

    def test_canonical_value_r7(self):
        # -1 * (1,13,11) = (13,1,3) mod 14, sorted (1,3,13) is the orbit minimum
        assert QuotientType(14, (1, 13, 11)).normalized() == QuotientType(14, (1, 3, 13))

    def test_idempotent(self):
        q = QuotientType(14, (1, 13, 11)).normalized()
        assert q.normalized() == q

    def test_orbit_constancy_random(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(1, 40)
            m = rng.randint(1, 5)
            q = QuotientType(n, tuple(rng.randrange(n) if n > 1 else 0 for _ in range(m)))
            canonical = q.normalized()
            units = [u for u in range(1, max(n, 2)) if math.gcd(u, n) == 1]
            u = rng.choice(units)
            shuffled = list((u * w) % n for w in q.weights)
            rng.shuffle(shuffled)
            assert QuotientType(n, tuple(shuffled)).normalized() == canonical

    def test_trivial_group(self):
        assert QuotientType(1, (0, 0, 0)).normalized() == QuotientType(1, (0, 0, 0))


class TestReidTai:
    def test_half_twist_terminal(self):
        assert reid_tai_is_terminal(QuotientType(2, (1, 1, 1))) is True

    def test_age_exactly_one(self):
        q = QuotientType(2, (1, 1, 0))
        assert reid_tai_is_terminal(q) is False
        assert reid_tai_is_canonical(q) is True

    def test_singular_point_of_the_family(self):
        assert reid_tai_is_terminal(QuotientType(14, (1, 13, 11))) is True

    def test_trivial_group_terminal(self):
        assert reid_tai_is_terminal(QuotientType(1, (0, 0, 0))) is True

    def test_non_faithful_fails(self):
        assert reid_tai_is_terminal(QuotientType(4, (2, 2, 2))) is False


class TestSmithNormalForm:
    def test_identity(self):
        u, d, v = smith_normal_form(identity_matrix(3))
        assert d == identity_matrix(3)
        assert matrix_product(matrix_product(u, identity_matrix(3)), v) == d

    def test_already_diagonal(self):
        u, d, v = smith_normal_form([[2, 0], [0, 4]])
        assert d == [[2, 0], [0, 4]]

    def test_divisibility_enforced(self):
        u, d, v = smith_normal_form([[2, 0], [0, 3]])
        assert d == [[1, 0], [0, 6]]

    def test_rectangular(self):
        a = [[2, 4, 4], [-6, 6, 12]]
        u, d, v = smith_normal_form(a)
        assert matrix_product(matrix_product(u, a), v) == d
        assert d[0][0] == 2 and d[1][1] % d[0][0] == 0

    def test_random_property_suite(self):
        rng = random.Random(31)
        for _ in range(60):
            m = rng.randint(1, 4)
            n = rng.randint(1, 4)
            a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            u, d, v = smith_normal_form(a)
            assert matrix_product(matrix_product(u, a), v) == d
            assert abs(determinant(u)) == 1
            assert abs(determinant(v)) == 1
            diag = [d[i][i] for i in range(min(m, n))]
            for i in range(m):
                for j in range(n):
                    if i != j:
                        assert d[i][j] == 0
            for x, y in zip(diag, diag[1:]):
                assert x >= 0 and y >= 0
                if x == 0:
                    assert y == 0
                else:
                    assert y % x == 0

    def test_invert_unimodular_rejects(self):
        with pytest.raises(ValueError):
            invert_unimodular([[2, 0], [0, 1]])


class TestLattice:
    def test_integral_vector_in_lattice(self):
        amb = QuotientType(2, (1, 1, 1, 0, 0))
        assert amb.lattice_contains((4, 3, 2, 1, 7))
        assert amb.is_primitive((4, 3, 2, 1, 7))

    def test_not_primitive(self):
        amb = QuotientType(1, (0, 0, 0))
        assert amb.lattice_contains((2, 2, 2))
        assert not amb.is_primitive((2, 2, 2))

    def test_generator_is_primitive(self):
        amb = QuotientType(2, (1, 1, 1))
        half = (Fraction(1, 2),) * 3
        assert amb.lattice_contains(half)
        assert amb.is_primitive(half)

    def test_outside_lattice(self):
        amb = QuotientType(2, (1, 1, 1))
        assert not amb.lattice_contains((Fraction(1, 2), 0, 0))
        assert not amb.lattice_contains((Fraction(1, 3),) * 3)


class TestCharts:
    def test_family_chart_orders(self):
        report = blowup_charts(QuotientType(2, (1, 1, 1, 0, 0)), (4, 3, 2, 1, 7))
        assert [c.order for c in report.charts] == [8, 6, 4, 2, 14]

    def test_family_last_chart_type(self):
        report = blowup_charts(QuotientType(2, (1, 1, 1, 0, 0)), (4, 3, 2, 1, 7))
        last = report.charts[4]
        assert len(last.factors) == 1
        assert last.factors[0].order == 14

    def test_ordinary_blowup_smooth(self):
        report = blowup_charts(QuotientType(1, (0, 0, 0)), (1, 1, 1))
        assert all(c.is_trivial() for c in report.charts)

    def test_half_point_resolution_charts(self):
        report = blowup_charts(QuotientType(2, (1, 1, 1)), (Fraction(1, 2),) * 3)
        assert all(c.is_trivial() for c in report.charts)

    def test_kawamata_chart_type(self):
        # 1/3(1,1,2) blown up at (1/3,1/3,2/3) keeps one 1/2(1,1,1) point
        report = blowup_charts(QuotientType(3, (1, 1, 2)),
                               (Fraction(1, 3), Fraction(1, 3), Fraction(2, 3)))
        orders = [c.order for c in report.charts]
        assert orders == [1, 1, 2]
        assert report.charts[2].factors[0].as_type().normalized() == \
            QuotientType(2, (1, 1, 1)).normalized()

    def test_rejects_bad_vectors(self):
        amb = QuotientType(2, (1, 1, 1, 0, 0))
        with pytest.raises(LatticeError):
            blowup_charts(amb, (4, 3, 2, 1))  # arity
        with pytest.raises(LatticeError):
            blowup_charts(amb, (4, 3, 2, 0, 7))  # not positive
        with pytest.raises(LatticeError):
            blowup_charts(QuotientType(1, (0, 0, 0)), (2, 2, 2))  # not primitive
        with pytest.raises(LatticeError):
            blowup_charts(QuotientType(2, (1, 1, 1)), (Fraction(1, 2), 1, Fraction(1, 2)))

    def test_order_formula_random(self):
        # chart order = v_i * [lattice : Z^m] for integral v
        rng = random.Random(41)
        for _ in range(25):
            m = rng.randint(2, 4)
            n = rng.randint(1, 8)
            weights = tuple(rng.randrange(n) if n > 1 else 0 for _ in range(m))
            amb = QuotientType(n, weights)
            v = tuple(rng.randint(1, 5) for _ in range(m))
            if not amb.is_primitive(v):
                continue
            index = n // math.gcd(n, *weights) if any(weights) else 1
            report = blowup_charts(amb, v)
            for i, chart in enumerate(report.charts):
                assert chart.order == v[i] * index


class TestEffectiveFactors:
    def test_kernel_divided_out(self):
        group = ChartGroup((ChartGroupFactor(4, (2,)),))
        assert effective_factors(group, 1) == [ChartGroupFactor(2, (1,))]

    def test_trivial_action(self):
        group = ChartGroup((ChartGroupFactor(4, (0, 0)),))
        assert effective_factors(group, 2) == []

    def test_coprime_factors_merge(self):
        group = ChartGroup((ChartGroupFactor(2, (1, 1, 1)), ChartGroupFactor(7, (1, 6, 3))))
        merged = effective_factors(group, 3)
        assert len(merged) == 1 and merged[0].order == 14
