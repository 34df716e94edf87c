"""(min,+) matrix product algorithms against the naive oracle."""

import numpy as np
import pytest

import oracles
from minplus import (
    Decomposition,
    DirectionViolation,
    IntMatrix,
    MonotoneTag,
    OpCounters,
    OverlapError,
    Subsequence,
    UniformViolation,
    cols_monotone,
    decompose_cols,
    decompose_rows,
    minplus_decomposed,
    minplus_few_values_product,
    minplus_mixed_uniform,
    minplus_naive,
    minplus_uniform_mixed,
    pad_decompositions,
    rows_monotone,
    shift_transform_matrices,
)
from minplus.generators import (
    planted_matrix_cols,
    planted_matrix_rows,
    planted_mixed_matrix_rows,
    planted_uniform_matrix_cols,
    planted_uniform_matrix_rows,
    random_matrix,
)

ND = MonotoneTag.NON_DECREASING
NI = MonotoneTag.NON_INCREASING


def dec(n, tag, *parts):
    return Decomposition(n, tuple(Subsequence(tuple(ix), tag) for ix in parts))


def worked_instance():
    """6x6 pair in which every row of A is (1,7,3,9,8,4) and every column
    of B is (5,11,2,7,13,10), with the matching 3/2-part splits."""
    a_row = [1, 7, 3, 9, 8, 4]
    b_col = [5, 11, 2, 7, 13, 10]
    A = IntMatrix(np.tile(a_row, (6, 1)))
    B = IntMatrix(np.tile(np.array(b_col)[:, None], (1, 6)))
    rows = [dec(6, ND, (0, 2, 5), (1, 4), (3,))] * 6
    cols = [dec(6, ND, (0, 1, 4), (2, 3, 5))] * 6
    return A, B, rows, cols


class TestNaive:
    def test_1x1(self):
        out = minplus_naive(IntMatrix([[2]]), IntMatrix([[3]]))
        assert out.entry(1, 1) == 5

    def test_worked_entry(self):
        A, B, _, _ = worked_instance()
        out = minplus_naive(A, B)
        assert out.entry(4, 5) == 5

    def test_matches_independent_oracle(self):
        rng = np.random.default_rng(1)
        A = rng.integers(-100, 100, (8, 8))
        B = rng.integers(-100, 100, (8, 8))
        out = minplus_naive(IntMatrix(A), IntMatrix(B))
        assert np.array_equal(out.values, oracles.minplus_matrix(A, B))
        assert out.all_finite


class TestDecomposed:
    def test_worked_instance(self):
        A, B, rows, cols = worked_instance()
        out = minplus_decomposed(A, rows, B, cols, "nondec")
        assert out.entry(4, 5) == 5  # min{1+5, 3+2, 7+11, 9+7}
        assert out == minplus_naive(A, B)

    def test_single_sorted_parts_equal_naive_with_one_call(self):
        rng = np.random.default_rng(4)
        A = IntMatrix(np.sort(rng.integers(-50, 50, (9, 9)), axis=1))
        B = IntMatrix(np.sort(rng.integers(-50, 50, (9, 9)), axis=0))
        rows = [dec(9, ND, tuple(range(9)))] * 9
        cols = [dec(9, ND, tuple(range(9)))] * 9
        c = OpCounters()
        out = minplus_decomposed(A, rows, B, cols, "nondec", counters=c)
        assert out == minplus_naive(A, B)
        assert c.witness_matrix_calls == 1

    @pytest.mark.parametrize("direction", ["nondec", "noninc"])
    def test_planted_instances_match_naive(self, direction):
        for seed in range(50):
            A, rows = planted_matrix_rows(seed, 16, 1 + seed % 3, direction)
            B, cols = planted_matrix_cols(seed + 1000, 16, 1 + seed % 2, direction)
            got = minplus_decomposed(A, rows, B, cols, direction)
            assert got == minplus_naive(A, B), (seed, direction)

    def test_direction_must_match_values(self):
        A, B, rows, cols = worked_instance()
        with pytest.raises(DirectionViolation):
            minplus_decomposed(A, rows, B, cols, "noninc")

    def test_uniform_parts_pass_either_direction(self):
        A = IntMatrix(np.full((4, 4), 3))
        B = IntMatrix(np.full((4, 4), 4))
        parts = [dec(4, MonotoneTag.UNIFORM, (0, 1, 2, 3))] * 4
        for direction in ("nondec", "noninc"):
            out = minplus_decomposed(A, parts, B, parts, direction)
            assert out == minplus_naive(A, B)

    def test_invalid_decomposition_rejected(self):
        A, B, rows, cols = worked_instance()
        bad = [dec(6, ND, (0, 2, 5), (1, 2, 4), (3,))] * 6
        with pytest.raises(OverlapError):
            minplus_decomposed(A, bad, B, cols, "nondec")

    def test_call_count_is_pair_product(self):
        for m_a, m_b in [(1, 1), (2, 3), (3, 4), (4, 2)]:
            A, rows = planted_matrix_rows(7, 12, m_a, "nondec")
            B, cols = planted_matrix_cols(8, 12, m_b, "nondec")
            c = OpCounters()
            minplus_decomposed(A, rows, B, cols, "nondec", counters=c)
            assert c.witness_matrix_calls == m_a * m_b

    def test_running_values_never_below_final(self):
        A, rows = planted_matrix_rows(5, 10, 3, "nondec")
        B, cols = planted_matrix_cols(6, 10, 2, "nondec")
        final = minplus_naive(A, B)
        seen = []

        def hook(o, r, values, finite):
            assert np.all(values[finite] >= final.values[finite])
            seen.append((o, r))

        out = minplus_decomposed(A, rows, B, cols, "nondec", pair_hook=hook)
        assert out == final
        assert seen == [(o, r) for o in range(3) for r in range(2)]

    def test_pair_order_independence(self):
        A, rows = planted_matrix_rows(9, 11, 3, "nondec")
        B, cols = planted_matrix_cols(10, 11, 3, "nondec")
        fwd = minplus_decomposed(A, rows, B, cols, "nondec")
        rows_r = [Decomposition(d.host_length, d.parts[::-1]) for d in rows]
        cols_r = [Decomposition(d.host_length, d.parts[::-1]) for d in cols]
        rev = minplus_decomposed(A, rows_r, B, cols_r, "nondec")
        assert fwd == rev

    def test_block_size_invariant(self):
        A, rows = planted_matrix_rows(12, 17, 2, "noninc")
        B, cols = planted_matrix_cols(13, 17, 3, "noninc")
        outs = [
            minplus_decomposed(A, rows, B, cols, "noninc", block_size=bs)
            for bs in (1, 5, 17)
        ]
        assert outs[0] == outs[1] == outs[2] == minplus_naive(A, B)

    def test_threads_match_sequential(self):
        A, rows = planted_matrix_rows(14, 13, 3, "nondec")
        B, cols = planted_matrix_cols(15, 13, 3, "nondec")
        seq = minplus_decomposed(A, rows, B, cols, "nondec", threads=1)
        par = minplus_decomposed(A, rows, B, cols, "nondec", threads=3)
        assert seq == par


class TestMixedUniform:
    def test_constant_columns(self):
        rng = np.random.default_rng(20)
        A = IntMatrix(rng.integers(-40, 40, (7, 7)))
        rows = decompose_rows(A, "greedy")
        col_vals = rng.integers(-40, 40, 7)
        B = IntMatrix(np.tile(col_vals, (7, 1)))
        cols = [dec(7, MonotoneTag.UNIFORM, tuple(range(7)))] * 7
        out = minplus_mixed_uniform(A, rows, B, cols)
        assert out == minplus_naive(A, B)

    def test_worked_rows_against_two_value_columns(self):
        A = IntMatrix(np.tile([1, 7, 3, 9, 8, 4], (6, 1)))
        rows = [dec(6, ND, (0, 2, 5), (1, 4), (3,))] * 6
        rng = np.random.default_rng(22)
        B = IntMatrix(rng.choice([2, 9], size=(6, 6)))
        cols = pad_decompositions(decompose_cols(B, "uniform"))[0]
        out = minplus_mixed_uniform(A, rows, B, cols)
        assert out == minplus_naive(A, B)

    def test_n1(self):
        A = IntMatrix([[5]])
        B = IntMatrix([[7]])
        one = [dec(1, ND, (0,))]
        uni = [dec(1, MonotoneTag.UNIFORM, (0,))]
        assert minplus_mixed_uniform(A, one, B, uni).entry(1, 1) == 12

    def test_rejects_nonconstant_column_parts(self):
        A, rows = planted_mixed_matrix_rows(1, 5, 2)
        B, cols = planted_matrix_cols(2, 5, 2, "nondec")
        with pytest.raises(UniformViolation):
            minplus_mixed_uniform(A, rows, B, cols)

    def test_planted_instances_match_naive(self):
        for seed in range(40):
            A, rows = planted_mixed_matrix_rows(seed, 14, 1 + seed % 3)
            B, cols = planted_uniform_matrix_cols(seed + 500, 14, 1 + seed % 4)
            got = minplus_mixed_uniform(A, rows, B, cols)
            assert got == minplus_naive(A, B), seed

    def test_call_count_doubles_pairs(self):
        A, rows = planted_mixed_matrix_rows(3, 10, 3)
        B, cols = planted_uniform_matrix_cols(4, 10, 2)
        c = OpCounters()
        minplus_mixed_uniform(A, rows, B, cols, counters=c)
        assert c.witness_matrix_calls == 2 * 3 * 2

    def test_uniform_rows_mixed_cols_wrapper(self):
        for seed in range(20):
            A, rows = planted_uniform_matrix_rows(seed, 12, 2)
            Bt, colst = planted_mixed_matrix_rows(seed + 90, 12, 3)
            B, cols = Bt.transpose(), colst
            got = minplus_uniform_mixed(A, rows, B, cols)
            assert got == minplus_naive(A, B), seed


class TestFewValues:
    def test_all_zero_single_product(self):
        Z = IntMatrix(np.zeros((8, 8), dtype=np.int64))
        rows = decompose_rows(Z, "uniform")
        cols = decompose_cols(Z, "uniform")
        c = OpCounters()
        out = minplus_few_values_product(Z, rows, Z, cols, counters=c)
        assert c.bool_products == 1
        assert out == minplus_naive(Z, Z)

    def test_two_by_two_value_classes_use_four_products(self):
        rng = np.random.default_rng(30)
        A_raw = rng.choice([0, 1], size=(8, 8))
        B_raw = rng.choice([0, 2], size=(8, 8))
        A_raw[0, :2] = [0, 1]  # force both classes into row 1 / column 1
        B_raw[:2, 0] = [0, 2]
        A, B = IntMatrix(A_raw), IntMatrix(B_raw)
        rows = decompose_rows(A, "uniform")
        cols = decompose_cols(B, "uniform")
        c = OpCounters()
        out = minplus_few_values_product(A, rows, B, cols, counters=c)
        assert c.bool_products == 4
        assert out == minplus_naive(A, B)

    def test_all_distinct_rows_degenerate(self):
        rng = np.random.default_rng(31)
        A = IntMatrix(np.stack([rng.permutation(4) for _ in range(4)]))
        B = IntMatrix(np.stack([rng.permutation(4) for _ in range(4)], axis=1))
        out = minplus_few_values_product(
            A, decompose_rows(A, "uniform"), B, decompose_cols(B, "uniform")
        )
        assert out == minplus_naive(A, B)

    def test_rejects_nonuniform_parts(self):
        A, rows = planted_matrix_rows(2, 6, 2, "nondec")
        B, cols = planted_uniform_matrix_cols(3, 6, 2)
        with pytest.raises(UniformViolation):
            minplus_few_values_product(A, rows, B, cols)

    def test_planted_instances_match_naive(self):
        for seed in range(40):
            A, rows = planted_uniform_matrix_rows(seed, 12, 1 + seed % 3)
            B, cols = planted_uniform_matrix_cols(seed + 77, 12, 1 + seed % 4)
            got = minplus_few_values_product(A, rows, B, cols)
            assert got == minplus_naive(A, B), seed


class TestShiftMatrices:
    def test_zero_shift(self):
        Z = IntMatrix(np.zeros((2, 2), dtype=np.int64))
        A2, B2, M = shift_transform_matrices(Z, Z)
        assert M == 0 and A2 == Z and B2 == Z

    def test_worked_2x2(self):
        A = IntMatrix([[1, -3], [2, 0]])
        B = IntMatrix([[4, 1], [-2, 5]])
        A2, B2, M = shift_transform_matrices(A, B)
        assert M == 5
        assert A2.entries.tolist() == [[11, 17], [12, 20]]
        assert B2.entries.tolist() == [[-6, -9], [-22, -15]]
        assert rows_monotone(A2, ND) and cols_monotone(B2, NI)
        assert minplus_naive(A2, B2) == minplus_naive(A, B)

    def test_mirrored_direction(self):
        rng = np.random.default_rng(40)
        A = IntMatrix(rng.integers(-30, 30, (9, 9)))
        B = IntMatrix(rng.integers(-30, 30, (9, 9)))
        A2, B2, _ = shift_transform_matrices(A, B, "noninc")
        assert rows_monotone(A2, NI) and cols_monotone(B2, ND)
        assert minplus_naive(A2, B2) == minplus_naive(A, B)

    def test_random_instances(self):
        for seed in range(25):
            A = random_matrix(seed, 12)
            B = random_matrix(seed + 1, 12)
            A2, B2, M = shift_transform_matrices(A, B)
            assert M == max(
                int(np.abs(A.entries).max()), int(np.abs(B.entries).max())
            )
            assert rows_monotone(A2, ND) and cols_monotone(B2, NI)
            assert minplus_naive(A2, B2) == minplus_naive(A, B)

    def test_overflow_guard(self):
        from minplus import SHIFTED_ENTRY_BOUND

        big = IntMatrix([[2**61]], entry_bound=SHIFTED_ENTRY_BOUND)
        with pytest.raises(OverflowError):
            shift_transform_matrices(big, big)


class TestHelpers:
    def test_pad_decompositions_to_common_count(self):
        d1 = dec(3, ND, (0, 1, 2))
        d2 = dec(3, ND, (0,), (1,), (2,))
        padded, m = pad_decompositions([d1, d2])
        assert m == 3
        assert [p.part_count for p in padded] == [3, 3]

    def test_decompose_rows_modes(self):
        M = IntMatrix(np.array([[3, 1, 2], [5, 5, 5], [9, 4, 4]]))
        by_rows = decompose_rows(M, "nondec")
        assert len(by_rows) == 3
        assert len({d.part_count for d in by_rows}) == 1  # padded equal
        uni = decompose_rows(M, "uniform")
        assert uni[1].parts[0].indices == (0, 1, 2)

    def test_decompose_cols_reads_columns(self):
        M = IntMatrix(np.array([[1, 9], [2, 8]]))
        cols = decompose_cols(M, "nondec")
        assert cols[0].parts[0].indices == (0, 1)
