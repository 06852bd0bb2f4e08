"""Tests for the Vandermonde MDS outer code."""

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from src.coding.field import field, random_matrix
from src.coding.mds import decode_batch, decode_rows, encode, make_generator
from src.errors import CodeConstructionError, DimensionError, InsufficientRowsError


class TestGenerator:
    def test_small_vandermonde(self):
        generator = make_generator(2, Fraction(2), 8)
        assert generator.codeword_length == 4
        assert generator.matrix.tolist() == [[1, 0], [1, 1], [1, 2], [1, 3]]
        assert generator.evaluation_points == (0, 1, 2, 3)

    def test_rate_one_is_identity(self):
        generator = make_generator(5, Fraction(1), 16)
        assert generator.is_identity
        assert np.array_equal(generator.matrix, field(16).Identity(5))

    def test_non_integer_length(self):
        with pytest.raises(CodeConstructionError):
            make_generator(3, Fraction(3, 2), 16)

    def test_rate_below_one(self):
        with pytest.raises(CodeConstructionError):
            make_generator(4, Fraction(1, 2), 16)

    def test_field_too_small(self):
        with pytest.raises(CodeConstructionError):
            make_generator(200, Fraction(2), 8)


class TestEncodeDecode:
    def test_any_m_rows_recover_message(self):
        rng = np.random.default_rng(11)
        generator = make_generator(4, Fraction(2), 16)
        a = random_matrix(4, 3, 16, rng)
        coded = encode(generator, a)
        for rows in combinations(range(8), 4):
            assert np.array_equal(decode_rows(generator, rows, coded[list(rows), :]), a)

    def test_extra_and_duplicate_rows(self):
        rng = np.random.default_rng(3)
        generator = make_generator(3, Fraction(5, 3), 16)
        a = random_matrix(3, 2, 16, rng)
        coded = encode(generator, a)
        rows = [4, 1, 4, 0, 2]
        assert np.array_equal(decode_rows(generator, rows, coded[rows, :]), a)

    def test_identity_decode(self):
        rng = np.random.default_rng(0)
        generator = make_generator(3, Fraction(1), 8)
        a = random_matrix(3, 4, 8, rng)
        assert np.array_equal(decode_rows(generator, [2, 0, 1], encode(generator, a)[[2, 0, 1], :]), a)

    def test_insufficient_rows(self):
        generator = make_generator(3, Fraction(2), 16)
        coded = encode(generator, random_matrix(3, 1, 16, np.random.default_rng(0)))
        with pytest.raises(InsufficientRowsError):
            decode_rows(generator, [0, 1, 1], coded[[0, 1, 1], :])

    def test_encode_shape_mismatch(self):
        generator = make_generator(3, Fraction(2), 16)
        with pytest.raises(DimensionError):
            encode(generator, random_matrix(4, 2, 16, np.random.default_rng(0)))

    def test_row_out_of_range(self):
        generator = make_generator(2, Fraction(2), 16)
        values = field(16).Zeros((2, 1))
        with pytest.raises(DimensionError):
            decode_rows(generator, [0, 9], values)


def all_nonsingular(stack) -> bool:
    """Gaussian elimination over the field, run on a (S, m, m) stack at once."""
    a = stack.copy()
    systems, m, _ = a.shape
    every = np.arange(systems)
    for c in range(m):
        candidates = a[:, c:, c] != 0
        if not candidates.any(axis=1).all():
            return False
        pivot = c + np.argmax(candidates, axis=1)
        pivot_rows = a[every, pivot].copy()
        a[every, pivot] = a[:, c].copy()
        a[:, c] = pivot_rows
        factors = a[:, c + 1:, c] / a[:, c:c + 1, c]
        a[:, c + 1:] = a[:, c + 1:] - factors[:, :, None] * a[:, c:c + 1, :]
    return True


def mds_shapes():
    for m in range(1, 9):
        for length in range(m, 17):
            yield m, length


class TestMdsProperty:
    @pytest.mark.parametrize("w", [8, 16])
    @pytest.mark.parametrize("m, length", list(mds_shapes()))
    def test_every_m_subset_is_nonsingular(self, w, m, length):
        generator = make_generator(m, Fraction(length, m), w)
        subsets = np.array(list(combinations(range(length), m)))
        assert all_nonsingular(generator.matrix[subsets])

    def test_elimination_spots_singular_matrix(self):
        gf = field(8)
        stack = gf([[[1, 2], [2, 4]], [[1, 0], [0, 1]]])
        assert not all_nonsingular(stack)
        assert all_nonsingular(stack[1:])

    def test_pair_determinants_of_small_code(self):
        # rows (1, x) at x = 0..3; det of rows i, j is x_j - x_i = i xor j
        generator = make_generator(2, Fraction(2), 8)
        for i, j in combinations(range(4), 2):
            assert int(np.linalg.det(generator.rows([i, j]))) == i ^ j

    def test_three_halves_rate_example(self):
        rng = np.random.default_rng(21)
        generator = make_generator(4, Fraction(3, 2), 16)
        a = random_matrix(4, 5, 16, rng)
        rows = [0, 2, 4, 5]
        assert np.array_equal(decode_rows(generator, rows, encode(generator, a)[rows, :]), a)

    def test_rate_two_random_subsets(self):
        rng = np.random.default_rng(22)
        generator = make_generator(5, Fraction(2), 16)
        a = random_matrix(5, 3, 16, rng)
        coded = encode(generator, a)
        for _ in range(20):
            rows = sorted(rng.choice(10, size=5, replace=False).tolist())
            assert np.array_equal(decode_rows(generator, rows, coded[rows, :]), a), rows

    def test_random_round_trips(self):
        rng = np.random.default_rng(23)
        for _ in range(120):
            m = int(rng.integers(1, 9))
            length = int(rng.integers(m, 17))
            w = int(rng.choice([8, 16]))
            generator = make_generator(m, Fraction(length, m), w)
            a = random_matrix(m, int(rng.integers(1, 4)), w, rng)
            rows = rng.permutation(length)[:int(rng.integers(m, length + 1))].tolist()
            assert np.array_equal(decode_rows(generator, rows, encode(generator, a)[rows, :]), a), (m, length, rows)


class TestDecodeBatch:
    def test_matches_linear_solve(self):
        rng = np.random.default_rng(31)
        gf = field(16)
        generator = make_generator(6, Fraction(2), 16)
        row_ids = np.array([rng.permutation(12)[:6] for _ in range(8)])
        values = gf(rng.integers(0, gf.order, (8, 6)))
        decoded = decode_batch(generator, row_ids, values)
        for s in range(8):
            expected = np.linalg.solve(generator.rows(row_ids[s]), values[s])
            assert np.array_equal(decoded[s], expected), s

    def test_identity_code_scatters_values(self):
        generator = make_generator(3, Fraction(1), 8)
        decoded = decode_batch(generator, np.array([[2, 0, 1]]), np.array([[7, 8, 9]]))
        assert decoded.tolist() == [[8, 9, 7]]

    def test_repeated_row_in_a_system(self):
        generator = make_generator(3, Fraction(2), 16)
        with pytest.raises(InsufficientRowsError):
            decode_batch(generator, np.array([[0, 1, 2], [0, 0, 2]]), np.zeros((2, 3), dtype=np.int64))

    def test_shape_checks(self):
        generator = make_generator(3, Fraction(2), 16)
        with pytest.raises(DimensionError):
            decode_batch(generator, np.array([[0, 1]]), np.zeros((1, 2), dtype=np.int64))
        with pytest.raises(DimensionError):
            decode_batch(generator, np.array([[0, 1, 6]]), np.zeros((1, 3), dtype=np.int64))
