from fractions import Fraction

import pytest

from kappaforge.algebra import GradedPoly, P_VARS, make_mono, mono_weight
from kappaforge.errors import DependencyError, DomainError
from kappaforge.kappa import KappaEngine, KappaKey, alpha_coeffs, build_Lhat
from kappaforge.solver import check_annihilation

GENUS2 = {
    ((3, 1),): Fraction(1, 1152),
    ((1, 1), (2, 1)): Fraction(1, 240),
    ((1, 3),): Fraction(43, 2880),
}


class TestAlphaCoefficients:
    def test_leading_coefficients(self):
        assert alpha_coeffs(1)[0] == Fraction(15, 4)
        assert alpha_coeffs(2)[0] == Fraction(105, 8)
        assert alpha_coeffs(3)[0] == Fraction(945, 16)

    def test_first_factor_expansion(self):
        # (x + 3/2)(x + 5/2) = x^2 + 4x + 15/4
        assert alpha_coeffs(1) == [Fraction(15, 4), Fraction(4), Fraction(1)]


class TestBuildLhat:
    def test_euler_operator_exact_shape(self):
        op = build_Lhat(0, 4)
        assert op.pivot_coeff == Fraction(-3, 2) and op.pivot_index == 0
        scalars = [t for t in op.terms if not t.derivatives]
        assert len(scalars) == 1 and scalars[0].coeff == Fraction(1, 16)
        linear = {
            t.derivatives[0]: t
            for t in op.terms
            if len(t.derivatives) == 1 and t.multiplier != 1
        }
        for m in range(1, 5):
            assert linear[m].coeff == m
            assert linear[m].multiplier == GradedPoly.variable(P_VARS, m)

    def test_first_operator_degree_zero_part_matches_printed_form(self):
        # the Bell-series construction must reproduce
        # -15/4 d/dp_1 + sum m(m+4) p_m d/dp_{m+1} - sum l m p_l p_m d/dp_{l+m+1}
        op = build_Lhat(1, 6)
        assert op.pivot_coeff == Fraction(-15, 4) and op.pivot_index == 1
        checked = 0
        for t in op.terms:
            if t.shift or len(t.derivatives) != 1 or t.multiplier == 1:
                continue
            m = t.derivatives[0] - 1
            expected = GradedPoly.variable(P_VARS, m).scale(m * (m + 4))
            for l in range(1, m):
                expected = expected - GradedPoly(
                    P_VARS, {make_mono([(l, 1), (m - l, 1)]): l * (m - l)}
                )
            assert t.multiplier.scale(t.coeff) == expected, m
            checked += 1
        assert checked == 6

    def test_first_operator_u2_multipliers(self):
        # single-derivative family carries S_{m+2}(2p) - S_{m+2}(p)
        op = build_Lhat(1, 4)
        singles = [
            t for t in op.terms if t.shift == 2 and len(t.derivatives) == 1
        ]
        by_index = {t.derivatives[0]: t for t in singles}
        t0 = by_index[0]
        assert t0.coeff == Fraction(1, 8)
        # S_2(2p) - S_2(p) = p_2 + 3/2 p_1^2
        assert t0.multiplier == GradedPoly(
            P_VARS, {make_mono({2: 1}): 1, make_mono({1: 2}): Fraction(3, 2)}
        )
        doubles = [t for t in op.terms if t.shift == 2 and len(t.derivatives) == 2]
        pair = {t.derivatives: t for t in doubles}[(0, 0)]
        # S_1(p) S_1(p) = p_1^2
        assert pair.multiplier == GradedPoly(P_VARS, {make_mono({1: 2}): 1})
        assert pair.coeff == Fraction(1, 8)

    def test_negative_derivative_indices_dropped(self):
        # for the second operator the genus-raising families would hit
        # indices m + n - 3 = m - 1 and l + i - 1 = l - 1; none may be negative
        op = build_Lhat(2, 6)
        for t in op.terms:
            assert all(i >= 0 for i in t.derivatives)
        singles = [t for t in op.terms if t.shift == 2 and len(t.derivatives) == 1]
        # the m = 0 single (index -1) is dropped, so the lowest index is 0 via m = 1
        assert min(t.derivatives[0] for t in singles) == 0
        weights = {t.derivatives[0]: t.multiplier.homogeneous_weight() for t in singles}
        assert weights[0] == 1  # S_1(2p) on d/dp_0

    def test_rejects_negative_index(self):
        with pytest.raises(DomainError):
            build_Lhat(-1, 3)


class TestKappaNumbers:
    def test_genus2_golden_values_fresh_engine(self):
        engine = KappaEngine()
        for pairs, expected in GENUS2.items():
            assert engine.kappa_number(2, pairs) == expected

    def test_kappa0_scaling_examples(self, kappa_engine):
        assert kappa_engine.kappa_number(2, [(3, 1)], kappa0_power=1) == Fraction(1, 576)
        assert kappa_engine.kappa_number(1, [], kappa0_power=1) == Fraction(1, 24)

    def test_kappa0_scaling_closed_form(self, kappa_engine):
        table = kappa_engine.solve(3)
        for key, value in table.items():
            if key.genus < 2:
                continue
            for n in range(1, 5):
                scaled = kappa_engine.kappa_number(
                    key.genus, key.exponents, kappa0_power=n
                )
                assert scaled == (2 * key.genus - 2) ** n * value

    def test_kappa0_in_exponent_list_is_folded(self, kappa_engine):
        direct = kappa_engine.kappa_number(2, [(0, 1), (3, 1)])
        assert direct == Fraction(1, 576)

    def test_weight_mismatch_is_zero(self, kappa_engine):
        assert kappa_engine.kappa_number(2, [(1, 1)]) == 0
        assert kappa_engine.kappa_number(3, [(2, 1), (1, 1)]) == 0

    def test_genus1_convention(self, kappa_engine):
        assert kappa_engine.kappa_number(1, []) == 0
        assert kappa_engine.kappa_number(1, [], kappa0_power=2) == 0
        assert kappa_engine.kappa_number(1, [(1, 1)]) == 0

    def test_genus_below_one_rejected(self, kappa_engine):
        with pytest.raises(DomainError):
            kappa_engine.kappa_number(0, [])

    def test_key_canonicalization(self):
        key = KappaKey.make(2, [(0, 2), (3, 1)])
        assert key.exponents == ((3, 1),)
        assert key.kappa0_power == 2

    def test_solve_at_genus_one_holds_only_the_seed(self):
        table = KappaEngine().solve(1)
        assert table == {KappaKey(1, (), 1): Fraction(1, 24)}

    def test_solve_genus_two_table(self):
        table = KappaEngine().solve(2)
        values = {k.exponents: v for k, v in table.items() if k.genus == 2}
        assert values == GENUS2


class TestKappaPotential:
    def test_seed_term(self, kappa_engine):
        potential = kappa_engine.kappa_potential(1)
        assert potential.coeff(0, make_mono({0: 1})) == Fraction(1, 24)
        assert potential.max_sector == 0

    def test_genus2_sector_assembly(self, kappa_engine):
        potential = kappa_engine.kappa_potential(2)
        sector = potential.body.sector(2)
        expected = GradedPoly(
            P_VARS,
            {
                make_mono({3: 1}): Fraction(1, 1152),
                make_mono({2: 1, 1: 1}): Fraction(1, 240),
                make_mono({1: 3}): Fraction(43, 2880) / 6,
            },
        )
        assert sector == expected

    def test_query_beyond_bound_raises(self, kappa_engine):
        potential = kappa_engine.kappa_potential(2)
        with pytest.raises(DependencyError):
            potential.sector(4)

    def test_sector_weights_are_homogeneous(self, kappa_engine):
        # the Euler operator identity: every stored monomial at genus g has
        # weighted degree exactly 3g - 3
        potential = kappa_engine.kappa_potential(4)
        for d, poly in potential.body.sectors():
            if d == 0:
                continue
            genus = d // 2 + 1
            for mono in poly.monomials():
                assert mono_weight(mono, P_VARS) == 3 * genus - 3


class TestAnnihilation:
    def test_all_operators_up_to_six_at_genus_three(self, kappa_engine):
        potential = kappa_engine.kappa_potential(3)
        for n in range(7):
            report = check_annihilation(build_Lhat(n, 6), potential)
            assert report.ok, report.describe()
