from fractions import Fraction

import pytest

from kappaforge.algebra import make_mono, mono_exp, mono_quotient
from kappaforge.combinat import partitions
from kappaforge.errors import DomainError, ResourceLimitError
from kappaforge.oracle import (
    fork_expansion_check,
    fork_images,
    iter_set_partitions,
    kappa_via_partitions,
    kappa_via_substitution,
    omega_expected_from_kappa,
    omega_via_fork,
)

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]


class TestSetPartitions:
    @pytest.mark.parametrize("n", range(9))
    def test_counts_match_bell_numbers(self, n):
        assert sum(1 for _ in iter_set_partitions(n)) == BELL[n]

    def test_blocks_partition_the_set(self):
        for blocks in iter_set_partitions(5):
            seen = [i for block in blocks for i in block]
            assert sorted(seen) == list(range(5))
            assert all(block for block in blocks)

    def test_no_duplicates(self):
        outcomes = [tuple(sorted(blocks)) for blocks in iter_set_partitions(6)]
        assert len(outcomes) == len(set(outcomes))


class TestPartitionFormula:
    def test_single_factor(self, psi_engine):
        assert kappa_via_partitions(psi_engine, 2, [4]) == Fraction(1, 1152)

    def test_two_factors(self, psi_engine):
        assert kappa_via_partitions(psi_engine, 2, [3, 2]) == Fraction(1, 240)

    def test_three_factors(self, psi_engine):
        assert kappa_via_partitions(psi_engine, 2, [2, 2, 2]) == Fraction(43, 2880)

    def test_kappa0_factor(self, psi_engine):
        assert kappa_via_partitions(psi_engine, 2, [1, 4]) == Fraction(1, 576)

    def test_genus_one_convention_value(self, psi_engine):
        assert kappa_via_partitions(psi_engine, 1, [1]) == Fraction(1, 24)

    def test_degree_mismatch_is_zero(self, psi_engine):
        assert kappa_via_partitions(psi_engine, 2, [2, 2]) == 0

    def test_partition_limit(self, psi_engine):
        with pytest.raises(ResourceLimitError):
            kappa_via_partitions(psi_engine, 5, [1] * 12, partition_limit=10)

    def test_rejects_bad_inputs(self, psi_engine):
        with pytest.raises(DomainError):
            kappa_via_partitions(psi_engine, 0, [1])
        with pytest.raises(DomainError):
            kappa_via_partitions(psi_engine, 2, [0, 4])

    def test_agrees_with_recursion_to_genus_four(self, psi_engine, kappa_engine):
        for genus in (2, 3, 4):
            for part in partitions(3 * genus - 3):
                ks = [i + 1 for i in part]
                via_partitions = kappa_via_partitions(
                    psi_engine, genus, ks, partition_limit=12
                )
                via_recursion = kappa_engine.kappa_number(
                    genus, [(i, 1) for i in part]
                )
                assert via_partitions == via_recursion, (genus, part)


class TestSubstitutionRoute:
    def test_table_matches_recursion_to_genus_three(self, psi_engine, kappa_engine):
        table = kappa_via_substitution(psi_engine, 3)
        assert table  # non-empty
        for key, value in table.items():
            assert value == kappa_engine.kappa_number(key.genus, key.exponents), key

    def test_single_kappa_coefficient(self, psi_engine):
        table = kappa_via_substitution(psi_engine, 2)
        only_k3 = [v for k, v in table.items() if k.exponents == ((3, 1),)]
        assert only_k3 == [Fraction(1, 1152)]

    def test_needs_genus_two(self, psi_engine):
        with pytest.raises(DomainError):
            kappa_via_substitution(psi_engine, 1)


class TestForkRoute:
    def test_translation_series_printed_coefficients(self):
        images = fork_images(4, 6)
        f0, f1 = images[0], images[1]
        s = make_mono
        assert f0.coeff(s({0: 1})) == 1
        assert f0.coeff(s({0: 1, 1: 1})) == -1
        assert f0.coeff(s({0: 2, 2: 1})) == Fraction(1, 2)
        assert f0.coeff(s({0: 1, 1: 2})) == Fraction(1, 2)
        assert f0.coeff(s({0: 3, 3: 1})) == Fraction(-1, 6)
        assert f0.coeff(s({0: 2, 1: 1, 2: 1})) == Fraction(-1, 2)
        assert f0.coeff(s({0: 1, 1: 3})) == Fraction(-1, 6)
        assert f1.coeff(s({1: 1})) == 1
        assert f1.coeff(s({0: 1, 2: 1})) == -1
        assert f1.coeff(s({1: 2})) == Fraction(-1, 2)
        assert f1.coeff(s({0: 2, 3: 1})) == Fraction(1, 2)
        assert f1.coeff(s({0: 1, 1: 1, 2: 1})) == 1
        assert f1.coeff(s({1: 3})) == Fraction(1, 6)

    def test_first_genus_one_coefficient(self, psi_engine):
        out = omega_via_fork(psi_engine, 1, 3)
        assert out[(1, make_mono({1: 1}))] == Fraction(1, 24)

    def test_constant_in_s0(self, psi_engine):
        out = omega_via_fork(psi_engine, 2, 4)
        assert all(mono_exp(mono, 0) == 0 for _, mono in out)

    def test_exponential_s1_structure(self, psi_engine):
        # genus >= 2 only: the genus-1 sector is a single linear term
        out = omega_via_fork(psi_engine, 2, 5)
        for (genus, mono), value in out.items():
            e1 = mono_exp(mono, 1)
            if not e1 or genus < 2:
                continue
            stripped = mono_quotient(mono, ((1, e1),))
            base = out.get((genus, stripped), Fraction(0))
            assert value == (2 * genus - 2) ** e1 * base, (genus, mono)

    def test_matches_kappa_values(self, psi_engine, kappa_engine):
        out = omega_via_fork(psi_engine, 2, 5)
        assert out
        for (genus, mono), value in out.items():
            expected = omega_expected_from_kappa(kappa_engine, genus, mono)
            assert value == expected, (genus, mono)

    def test_direct_expansion_spot_check(self, psi_engine):
        assert fork_expansion_check(psi_engine, 2, 3)
