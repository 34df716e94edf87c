"""(min,+) convolution algorithms against the naive oracle."""

import math

import numpy as np
import pytest

import oracles
from minplus import (
    Decomposition,
    DirectionViolation,
    GroupPartition,
    IntVector,
    MonotoneTag,
    OpCounters,
    Subsequence,
    UniformViolation,
    conv_decomposed,
    conv_few_values,
    conv_naive,
    conv_shift_offsets,
    decompose_nondecreasing,
    decompose_nonincreasing,
    decompose_uniform,
    shift_transform_vectors,
    validate_group_partition,
    vector_monotone,
)
from minplus.generators import (
    planted_monotone_vector,
    planted_uniform_vector,
    random_vector,
)

ND = MonotoneTag.NON_DECREASING
NI = MonotoneTag.NON_INCREASING
UN = MonotoneTag.UNIFORM

A6 = IntVector([1, 7, 3, 9, 8, 4])
B6 = IntVector([13, 7, 11, 5, 10, 12])


def dec(n, tag, *parts):
    return Decomposition(n, tuple(Subsequence(tuple(ix), tag) for ix in parts))


class TestNaive:
    def test_singletons(self):
        out = conv_naive(IntVector([0]), IntVector([0]))
        assert out.coord(0) == 0 and len(out.values) == 1

    def test_worked_coordinate(self):
        out = conv_naive(A6, B6)
        assert out.coord(4) == 11  # attained by a_0 + b_4 = 1 + 10
        assert len(out.values) == 11

    def test_matches_independent_oracle(self):
        rng = np.random.default_rng(2)
        a = rng.integers(-200, 200, 16)
        b = rng.integers(-200, 200, 16)
        out = conv_naive(IntVector(a), IntVector(b))
        assert np.array_equal(out.values, oracles.minplus_conv(a, b))
        assert out.all_finite


class TestDecomposed:
    def test_sorted_single_parts_one_call(self):
        rng = np.random.default_rng(3)
        a = IntVector(np.sort(rng.integers(-50, 50, 10)))
        b = IntVector(np.sort(rng.integers(-50, 50, 10))[::-1].copy())
        da = dec(10, ND, tuple(range(10)))
        db = dec(10, NI, tuple(range(10)))
        c = OpCounters()
        out = conv_decomposed(a, da, b, db, counters=c)
        assert out == conv_naive(a, b)
        assert c.witness_conv_calls == 1

    def test_opposite_orientation(self):
        rng = np.random.default_rng(4)
        a = IntVector(np.sort(rng.integers(-50, 50, 9))[::-1].copy())
        b = IntVector(np.sort(rng.integers(-50, 50, 9)))
        da = dec(9, NI, tuple(range(9)))
        db = dec(9, ND, tuple(range(9)))
        assert conv_decomposed(a, da, b, db) == conv_naive(a, b)

    def test_planted_instances_match_naive(self):
        for seed in range(100):
            n = (8, 16, 32, 64)[seed % 4]
            a, da = planted_monotone_vector(seed, n, 1 + seed % 3, "nondec")
            b, db = planted_monotone_vector(seed + 999, n, 1 + seed % 2, "noninc")
            got = conv_decomposed(a, da, b, db)
            assert got == conv_naive(a, b), seed

    def test_swapped_sides_agree(self):
        a, da = planted_monotone_vector(11, 20, 2, "nondec")
        b, db = planted_monotone_vector(12, 20, 3, "noninc")
        assert conv_decomposed(a, da, b, db) == conv_decomposed(b, db, a, da)

    def test_same_direction_rejected(self):
        a, da = planted_monotone_vector(5, 8, 2, "nondec")
        b, db = planted_monotone_vector(6, 8, 2, "nondec")
        with pytest.raises(DirectionViolation):
            conv_decomposed(a, da, b, db)

    def test_call_count_is_pair_product(self):
        for m_a, m_b in [(1, 1), (2, 3), (3, 4)]:
            a, da = planted_monotone_vector(7, 24, m_a, "nondec")
            b, db = planted_monotone_vector(8, 24, m_b, "noninc")
            c = OpCounters()
            conv_decomposed(a, da, b, db, counters=c)
            assert c.witness_conv_calls == m_a * m_b

    def test_running_values_never_below_final(self):
        a, da = planted_monotone_vector(9, 15, 3, "nondec")
        b, db = planted_monotone_vector(10, 15, 2, "noninc")
        final = conv_naive(a, b)
        calls = []

        def hook(o, r, values, finite):
            assert np.all(values[finite] >= final.values[finite])
            calls.append((o, r))

        out = conv_decomposed(a, da, b, db, pair_hook=hook)
        assert out == final
        assert len(calls) == da.part_count * db.part_count

    def test_block_size_and_threads_invariant(self):
        a, da = planted_monotone_vector(13, 30, 3, "noninc")
        b, db = planted_monotone_vector(14, 30, 3, "nondec")
        base = conv_decomposed(a, da, b, db)
        assert base == conv_naive(a, b)
        for bs in (1, 6, 30):
            assert conv_decomposed(a, da, b, db, block_size=bs) == base
        assert conv_decomposed(a, da, b, db, threads=3) == base


class TestGroupPartition:
    def test_build_sorts_stably(self):
        gp = GroupPartition.build(np.array([5, 1, 5, 0, 1]), 2)
        assert gp.order == (3, 1, 4, 0, 2)
        assert gp.group_count == 3
        assert gp.groups == ((3, 1), (4, 0), (2,))

    def test_group_count_ceiling(self):
        gp = GroupPartition.build(np.arange(10), 3)
        assert gp.group_count == 4
        assert [len(g) for g in gp.groups] == [3, 3, 3, 1]

    def test_validate_accepts_built(self):
        rng = np.random.default_rng(6)
        vals = rng.integers(0, 5, 17)
        gp = GroupPartition.build(vals, 4)
        validate_group_partition(gp, vals)

    def test_validate_rejects_unsorted(self):
        vals = np.array([3, 1, 2])
        gp = GroupPartition((0, 1, 2), ((0, 1, 2),), 3)
        with pytest.raises(ValueError):
            validate_group_partition(gp, vals)

    def test_validate_rejects_unstable_ties(self):
        vals = np.array([2, 2])
        gp = GroupPartition((1, 0), ((1, 0),), 2)
        with pytest.raises(ValueError):
            validate_group_partition(gp, vals)

    def test_validate_rejects_oversized_group(self):
        vals = np.array([1, 2, 3])
        gp = GroupPartition((0, 1, 2), ((0, 1, 2),), 2)
        with pytest.raises(ValueError):
            validate_group_partition(gp, vals)


class TestFewValues:
    def test_constant_b_window_minimum(self):
        rng = np.random.default_rng(7)
        a = IntVector(rng.integers(-30, 30, 8))
        b = IntVector(np.full(8, 4))
        db = decompose_uniform(b.coords)
        out = conv_few_values(a, b, db)
        assert out == conv_naive(a, b)
        # each coordinate is 4 plus the minimum of a over the overlap window
        av = a.coords
        for k in range(15):
            lo, hi = max(0, k - 7), min(7, k)
            assert out.coord(k) == 4 + av[lo : hi + 1].min()

    def test_worked_instance_singleton_classes(self):
        db = decompose_uniform(B6.coords)
        assert db.part_count == 6
        out = conv_few_values(A6, B6, db, ell=3)
        assert out.coord(4) == 11
        assert out == conv_naive(A6, B6)

    def test_random_small_alphabets(self):
        for seed in range(100):
            n = (8, 16, 32, 64)[seed % 4]
            b, db = planted_uniform_vector(seed, n, 1 + seed % 4)
            a = random_vector(seed + 555, n)
            ell = (1, math.isqrt(n - 1) + 1, n)[seed % 3]
            got = conv_few_values(a, b, db, ell=ell)
            assert got == conv_naive(a, b), seed

    def test_rejects_nonconstant_parts(self):
        a = random_vector(1, 6)
        b, db = planted_monotone_vector(2, 6, 2, "nondec")
        with pytest.raises(UniformViolation):
            conv_few_values(a, b, db)

    def test_boolean_convolution_count(self):
        for n, ell, h in [(12, 3, 2), (10, 3, 3), (16, 4, 1), (9, 9, 4)]:
            b, db = planted_uniform_vector(n + ell + h, n, h)
            h_real = db.part_count
            a = random_vector(n, n)
            c = OpCounters()
            conv_few_values(a, b, db, ell=ell, counters=c)
            assert c.bool_convolutions == h_real * math.ceil(n / ell)

    def test_default_group_size(self):
        b, db = planted_uniform_vector(3, 20, 2)
        a = random_vector(4, 20)
        assert conv_few_values(a, b, db) == conv_naive(a, b)


class TestShiftVectors:
    def test_worked_pair(self):
        a2, b2, M = shift_transform_vectors(IntVector([3, -1]), IntVector([-2, 4]))
        assert M == 4
        assert a2.coords.tolist() == [3, 7]
        assert b2.coords.tolist() == [-2, 12]
        shifted = conv_naive(a2, b2)
        plain = conv_naive(IntVector([3, -1]), IntVector([-2, 4]))
        off = conv_shift_offsets(2, M)
        assert plain.values.tolist() == [1, -3, 3]
        assert shifted.values.tolist() == (plain.values + off).tolist()
        assert shifted.coord(1) == 5

    def test_zero_inputs_unchanged(self):
        z = IntVector([0, 0])
        a2, b2, M = shift_transform_vectors(z, z)
        assert M == 0 and a2 == z and b2 == z

    @pytest.mark.parametrize("direction", ["nondec", "noninc"])
    def test_random_identity(self, direction):
        tag = ND if direction == "nondec" else NI
        for seed in range(50):
            n = 3 + seed % 14
            a = random_vector(seed, n)
            b = random_vector(seed + 321, n)
            a2, b2, M = shift_transform_vectors(a, b, direction)
            assert vector_monotone(a2, tag) and vector_monotone(b2, tag)
            off = conv_shift_offsets(n, M, direction)
            got = conv_naive(a2, b2).values - off
            assert np.array_equal(got, conv_naive(a, b).values)

    def test_overflow_guard(self):
        from minplus import SHIFTED_ENTRY_BOUND

        big = IntVector([0, 2**61], entry_bound=SHIFTED_ENTRY_BOUND)
        with pytest.raises(OverflowError):
            shift_transform_vectors(big, big)


class TestDirectionalDecomposeRoundTrip:
    def test_nondec_parts_feed_decomposed_product(self):
        a = A6
        da = decompose_nondecreasing(a.coords)
        b = IntVector([13, 7, 11, 5, 10, 2])
        db = decompose_nonincreasing(b.coords)
        out = conv_decomposed(a, da, b, db)
        assert out == conv_naive(a, b)
        assert out.coord(4) == 11
