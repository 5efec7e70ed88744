"""Band-budget inequality: single sequences, enumeration sweeps, instances."""
import math

import numpy as np
import pytest

from graphbandits import (
    BanditInstance,
    InputError,
    SequenceInstance,
    all_max_sequence,
    complete,
    decompose,
    disjoint_cliques,
    edgeless,
    exhaustive_verify,
    verify_decomposition,
    verify_instance,
    verify_sequence,
)

from oracles import random_instance


class TestSequenceInstance:
    def test_terms_are_dyadic(self):
        inst = SequenceInstance(alpha=4, counts=(4, 2, 1))
        assert inst.terms() == (8, 8, 8)

    def test_validation(self):
        with pytest.raises(InputError):
            SequenceInstance(alpha=0, counts=(1,))
        with pytest.raises(InputError):
            SequenceInstance(alpha=2, counts=())
        with pytest.raises(InputError):
            SequenceInstance(alpha=2, counts=(3,))
        with pytest.raises(InputError):
            SequenceInstance(alpha=2, counts=(-1,))


class TestVerifySequence:
    def test_ratio_examples(self):
        holds, ratio = verify_sequence(SequenceInstance(1, (1, 1, 1)))
        assert holds and ratio == pytest.approx(1.75)
        holds, ratio = verify_sequence(SequenceInstance(4, (4, 2, 1)))
        assert holds and ratio == pytest.approx(3.0)
        holds, ratio = verify_sequence(SequenceInstance(1, (1,)))
        assert holds and ratio == pytest.approx(1.0)

    def test_all_zero_rejected(self):
        with pytest.raises(InputError):
            verify_sequence(SequenceInstance(2, (0, 0, 0)))

    def test_zero_padding_does_not_change_ratio(self):
        _, base = verify_sequence(SequenceInstance(3, (3, 1)))
        _, padded = verify_sequence(SequenceInstance(3, (3, 1, 0, 0)))
        assert base == padded


class TestAllMaxSequence:
    def test_structure(self):
        inst = all_max_sequence(alpha=4, num_phases=5, peak_phase=3, peak_count=2)
        # below the peak the count doubles per band until alpha caps it;
        # above the peak it halves with integer floor
        assert inst.counts == (4, 4, 2, 1, 0)

    def test_peak_preserved(self):
        for alpha in range(1, 7):
            for num_phases in range(1, 9):
                for m in range(1, num_phases + 1):
                    for k_m in range(1, alpha + 1):
                        inst = all_max_sequence(alpha, num_phases, m, k_m)
                        terms = inst.terms()
                        assert max(terms) == k_m << m
                        assert terms[m - 1] == k_m << m

    def test_worst_cases_respect_budget(self):
        for alpha in range(1, 7):
            threshold = math.log2(alpha) + 3.0
            for num_phases in range(1, 9):
                for m in range(1, num_phases + 1):
                    for k_m in range(1, alpha + 1):
                        holds, ratio = verify_sequence(
                            all_max_sequence(alpha, num_phases, m, k_m)
                        )
                        assert holds
                        assert ratio <= threshold + 1e-9

    def test_validation(self):
        with pytest.raises(InputError):
            all_max_sequence(2, 3, 0, 1)
        with pytest.raises(InputError):
            all_max_sequence(2, 3, 4, 1)
        with pytest.raises(InputError):
            all_max_sequence(2, 3, 1, 3)
        with pytest.raises(InputError):
            all_max_sequence(2, 3, 1, 0)


class TestExhaustiveVerify:
    def test_tiny_box(self):
        report = exhaustive_verify(alpha=1, num_phases=3)
        assert report.exhaustive
        assert report.instances_checked == 8
        assert report.nonzero_checked == 7
        assert report.violation_count == 0
        assert report.passed

    def test_eighty_one_sequences(self):
        report = exhaustive_verify(alpha=2, num_phases=4)
        assert report.instances_checked == 81
        assert report.nonzero_checked == 80
        assert report.violation_count == 0
        assert report.violations == ()
        assert report.tightest_ratio == pytest.approx(2.75)
        assert report.tight_witness == (2, 2, 2, 1)
        assert report.tightest_ratio <= math.log2(2) + 3.0

    def test_single_band_box(self):
        report = exhaustive_verify(alpha=3, num_phases=1)
        assert report.instances_checked == 4
        assert report.tightest_ratio == pytest.approx(1.0)

    def test_sampled_mode(self):
        report = exhaustive_verify(alpha=3, num_phases=10, budget=2000, seed=7)
        assert not report.exhaustive
        assert report.instances_checked == 2000
        assert report.nonzero_checked <= 2000
        assert report.violation_count == 0
        assert report.tight_witness is not None
        again = exhaustive_verify(alpha=3, num_phases=10, budget=2000, seed=7)
        assert again.tightest_ratio == report.tightest_ratio
        assert again.tight_witness == report.tight_witness
        other = exhaustive_verify(alpha=3, num_phases=10, budget=2000, seed=8)
        assert other.instances_checked == 2000

    def test_witness_ratio_is_reproducible(self):
        report = exhaustive_verify(alpha=4, num_phases=5)
        _, ratio = verify_sequence(
            SequenceInstance(alpha=4, counts=report.tight_witness)
        )
        assert ratio == pytest.approx(report.tightest_ratio)

    def test_validation(self):
        with pytest.raises(InputError):
            exhaustive_verify(0, 3)
        with pytest.raises(InputError):
            exhaustive_verify(2, 0)
        with pytest.raises(InputError):
            exhaustive_verify(2, 3, budget=0)


class TestVerifyDecomposition:
    def test_two_band_example(self):
        inst = BanditInstance(np.array([0.9, 0.6, 0.6, 0.6]), edgeless(4))
        report = verify_decomposition(decompose(inst, 10**6))
        # single nonzero band: both partial sums are zero
        assert report.peak_phase == 2
        assert report.peak_term == 12
        assert report.upper_sum == 0
        assert report.lower_sum == 0
        assert report.total == 12
        assert report.upper_budget == 12  # j1 = 1
        assert report.lower_budget == 24  # j2 = 1
        assert report.all_hold

    def test_single_phase(self):
        inst = BanditInstance(np.array([0.9, 0.5]), edgeless(2))
        report = verify_decomposition(decompose(inst, 100))
        assert report.upper_sum == 0
        assert report.lower_sum == 0
        assert report.all_hold

    def test_equal_terms_tie(self):
        # bands 1 and 2 tie at term 4; the peak resolves to band 1, whose
        # upper budget j1 * peak needs j1 >= 1, true because K_m = 2
        inst = BanditInstance(
            np.array([1.0, 0.4, 0.3, 0.7]), disjoint_cliques((2, 2))
        )
        d = decompose(inst, 100)
        assert d.peak_phase == 1
        assert d.band(1).independent_size == 2
        assert d.log2_peak_size == 1
        assert d.log2_alpha_ratio == 0
        report = verify_decomposition(d)
        assert report.upper_sum == report.peak_term == 4
        assert report.upper_budget == 4
        assert report.combined_budget == 12
        assert report.all_hold

    def test_empty_decomposition_rejected(self):
        inst = BanditInstance(np.array([0.5, 0.5]), complete(2))
        with pytest.raises(InputError):
            verify_decomposition(decompose(inst, 100))

    def test_random_instances_all_hold(self):
        rng = np.random.default_rng(59)
        checked = 0
        while checked < 200:
            inst = random_instance(rng)
            d = decompose(inst, 10**5)
            if d.is_empty:
                continue
            report = verify_decomposition(d)
            assert report.all_hold
            assert report.total == d.weighted_total
            checked += 1


class TestVerifyInstance:
    def test_complete_three_arm_example(self):
        # weighted total 6 against budget 2 * 3 * 2.5 = 15
        inst = BanditInstance(np.array([0.9, 0.5, 0.2]), complete(3))
        assert verify_instance(inst, 10**6)

    def test_vacuous_on_all_optimal(self):
        inst = BanditInstance(np.array([0.4, 0.4]), complete(2))
        assert verify_instance(inst, 10**6)

    def test_random_instances(self):
        rng = np.random.default_rng(61)
        for _ in range(200):
            assert verify_instance(random_instance(rng), 10**5)
