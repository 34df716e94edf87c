"""Greedy monotone/uniform decompositions against brute-force minima."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from minplus import (
    MonotoneTag,
    OrderViolation,
    Decomposition,
    Subsequence,
    char_vector,
    decompose_monotone_greedy,
    decompose_nondecreasing,
    decompose_nonincreasing,
    decompose_uniform,
    decomposition_stats,
    longest_strictly_decreasing_length,
    longest_strictly_increasing_length,
    validate_decomposition,
)

ND = MonotoneTag.NON_DECREASING
NI = MonotoneTag.NON_INCREASING

int_lists = st.lists(st.integers(-9, 9), min_size=1, max_size=30)


class TestNonDecreasing:
    def test_worked_example_needs_three_parts(self):
        v = np.array([1, 7, 3, 9, 8, 4])
        d = decompose_nondecreasing(v)
        assert d.part_count == 3
        validate_decomposition(d, v)
        assert all(p.tag is ND for p in d.parts)
        assert oracles.min_monotone_parts(v, nondec=True) == 3

    def test_sorted_input_is_one_part(self):
        d = decompose_nondecreasing(np.arange(10))
        assert d.part_count == 1
        assert d.parts[0].indices == tuple(range(10))

    def test_strictly_decreasing_input_needs_n_parts(self):
        assert decompose_nondecreasing(np.arange(10)[::-1]).part_count == 10

    @given(int_lists)
    @settings(max_examples=150)
    def test_valid_and_minimal(self, xs):
        v = np.array(xs, dtype=np.int64)
        d = decompose_nondecreasing(v)
        validate_decomposition(d, v)
        assert d.part_count == oracles.longest_strict_dec(xs)

    def test_exhaustive_minimality_small(self):
        for length in range(1, 6):
            for xs in itertools.product((1, 2, 3), repeat=length):
                got = decompose_nondecreasing(np.array(xs)).part_count
                assert got == oracles.min_monotone_parts(xs, nondec=True), xs


class TestNonIncreasing:
    def test_two_part_split_of_this_vector_is_impossible(self):
        # its longest strictly increasing subsequence (7, 10, 12) forces 3
        v = np.array([13, 7, 11, 5, 10, 12])
        candidate = Decomposition(
            6, (Subsequence((0, 2, 4), NI), Subsequence((1, 3, 5), NI))
        )
        with pytest.raises(OrderViolation):
            validate_decomposition(candidate, v)
        d = decompose_nonincreasing(v)
        validate_decomposition(d, v)
        assert d.part_count == 3
        assert oracles.min_monotone_parts(v, nondec=False) == 3

    def test_lowered_tail_makes_two_parts_enough(self):
        v = np.array([13, 7, 11, 5, 10, 2])
        d = decompose_nonincreasing(v)
        validate_decomposition(d, v)
        assert d.part_count == 2
        assert oracles.min_monotone_parts(v, nondec=False) == 2

    @given(int_lists)
    @settings(max_examples=150)
    def test_valid_and_minimal(self, xs):
        v = np.array(xs, dtype=np.int64)
        d = decompose_nonincreasing(v)
        validate_decomposition(d, v)
        assert all(p.tag is NI for p in d.parts)
        assert d.part_count == oracles.longest_strict_inc(xs)


class TestGreedyEitherDirection:
    @given(int_lists)
    @settings(max_examples=100)
    def test_valid_and_never_worse_than_exact(self, xs):
        v = np.array(xs, dtype=np.int64)
        d = decompose_monotone_greedy(v)
        validate_decomposition(d, v)
        assert d.part_count <= min(
            oracles.longest_strict_dec(xs), oracles.longest_strict_inc(xs)
        )

    def test_merging_can_beat_both_single_directions(self):
        # rising run then falling run: one nondec and one noninc part
        # suffice, while either single direction needs 3 or 4
        v = np.array([1, 2, 3, 9, 6, 0])
        assert decompose_nondecreasing(v).part_count == 3
        assert decompose_nonincreasing(v).part_count == 4
        assert decompose_monotone_greedy(v).part_count == 2


class TestUniform:
    def test_constant_pair(self):
        d = decompose_uniform(np.array([5, 5]))
        assert d.part_count == 1
        assert d.parts[0].indices == (0, 1)
        assert d.parts[0].tag is MonotoneTag.UNIFORM

    def test_first_occurrence_order(self):
        v = np.array([4, 7, 4, 1, 7])
        d = decompose_uniform(v)
        assert [p.indices for p in d.parts] == [(0, 2), (1, 4), (3,)]
        validate_decomposition(d, v)

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=20))
    def test_one_part_per_distinct_value(self, xs):
        v = np.array(xs, dtype=np.int64)
        d = decompose_uniform(v)
        validate_decomposition(d, v)
        assert d.part_count == len(set(xs))


class TestCharVector:
    def test_golden_characteristics(self):
        p1 = Subsequence((0, 2, 4), NI)
        p2 = Subsequence((1, 3, 5), NI)
        assert char_vector(p1, 6).bits.astype(int).tolist() == [1, 0, 1, 0, 1, 0]
        assert char_vector(p2, 6).bits.astype(int).tolist() == [0, 1, 0, 1, 0, 1]

    def test_empty_part(self):
        p = Subsequence((), MonotoneTag.UNIFORM)
        assert not char_vector(p, 4).bits.any()


class TestExtremalLengths:
    @given(int_lists)
    def test_against_quadratic_dp(self, xs):
        assert longest_strictly_increasing_length(
            np.array(xs)
        ) == oracles.longest_strict_inc(xs)
        assert longest_strictly_decreasing_length(
            np.array(xs)
        ) == oracles.longest_strict_dec(xs)

    def test_known_values(self):
        v = np.array([1, 7, 3, 9, 8, 4])
        assert longest_strictly_decreasing_length(v) == 3  # e.g. 9, 8, 4
        assert longest_strictly_increasing_length(v) == 3  # e.g. 1, 3, 4


class TestStats:
    def test_nondec_certificate(self):
        v = np.array([1, 7, 3, 9, 8, 4])
        d = decompose_nondecreasing(v)
        st_ = decomposition_stats(d, v)
        assert st_.parts_count == 3
        assert st_.direction == "nondec"
        assert st_.lower_bound_certificate == 3

    def test_uniform_certificate_counts_values(self):
        v = np.array([2, 2, 5, 2])
        st_ = decomposition_stats(decompose_uniform(v), v)
        assert st_.direction == "uniform"
        assert st_.lower_bound_certificate == 2

    def test_mixed_has_no_certificate(self):
        v = np.array([1, 2, 3, 9, 6, 0])
        st_ = decomposition_stats(decompose_monotone_greedy(v), v)
        assert st_.direction == "mixed"
        assert st_.lower_bound_certificate is None

    @given(int_lists)
    @settings(max_examples=60)
    def test_certificate_is_a_true_lower_bound(self, xs):
        v = np.array(xs, dtype=np.int64)
        for fn in (decompose_nondecreasing, decompose_nonincreasing):
            d = fn(v)
            st_ = decomposition_stats(d, v)
            if st_.lower_bound_certificate is not None:
                assert d.part_count == st_.lower_bound_certificate
