"""Tests for GF(2^w) arithmetic."""

import numpy as np
import pytest

from src.coding.field import (
    field,
    field_matrix,
    gf_add,
    gf_inv,
    gf_mul,
    matrix_from_bytes,
    matrix_to_bytes,
    random_matrix,
)
from src.errors import DimensionError, FieldWidthError, FieldZeroDivisionError


class TestScalars:
    def test_addition_is_xor(self):
        assert gf_add(0x53, 0xCA) == 0x53 ^ 0xCA
        assert gf_add(7, 7) == 0

    def test_multiplication_reduces_by_polynomial(self):
        # x^7 * x = x^8 = x^4 + x^3 + x^2 + 1 under 0x11D
        assert gf_mul(0x80, 0x02, 8) == 0x1D
        # x^15 * x = x^12 + x^3 + x + 1 under 0x1100B
        assert gf_mul(0x8000, 0x0002, 16) == 0x100B

    def test_inverse_of_two_in_gf256(self):
        assert gf_inv(2, 8) == 0x8E

    @pytest.mark.parametrize("w", [8, 16])
    @pytest.mark.parametrize("a", [1, 2, 3, 0x53, 0xFF])
    def test_inverse_round_trip(self, w, a):
        assert gf_mul(a, gf_inv(a, w), w) == 1

    def test_zero_has_no_inverse(self):
        with pytest.raises(FieldZeroDivisionError):
            gf_inv(0, 16)

    def test_zero_divisor_error_is_a_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            gf_inv(0, 8)

    def test_out_of_range_element(self):
        with pytest.raises(ValueError):
            gf_mul(256, 1, 8)


class TestFieldClass:
    def test_unsupported_width(self):
        with pytest.raises(FieldWidthError):
            field(12)

    def test_field_is_cached(self):
        assert field(16) is field(16)
        assert field(8).order == 256

    def test_random_matrix_is_seeded(self):
        a = random_matrix(3, 4, 16, np.random.default_rng(5))
        b = random_matrix(3, 4, 16, np.random.default_rng(5))
        assert a.shape == (3, 4)
        assert np.array_equal(a, b)

    def test_field_matrix_requires_2d(self):
        with pytest.raises(DimensionError):
            field_matrix([1, 2, 3], 8)


class TestByteCodec:
    def test_little_endian_layout(self):
        matrix = field_matrix([[1, 256]], 16)
        assert matrix_to_bytes(matrix, 16) == b"\x01\x00\x00\x01"

    def test_decode_restores_matrix(self):
        matrix = random_matrix(5, 3, 16, np.random.default_rng(1))
        data = matrix_to_bytes(matrix, 16)
        assert np.array_equal(matrix_from_bytes(data, 5, 3, 16), matrix)

    def test_wrong_size(self):
        with pytest.raises(DimensionError):
            matrix_from_bytes(b"\x00\x01\x02", 2, 2, 8)


def gf256_tables():
    """exp/log tables of GF(2^8) under 0x11D, generated by x = 2."""
    exp = [1]
    for _ in range(254):
        value = exp[-1] << 1
        if value & 0x100:
            value ^= 0x11D
        exp.append(value)
    log = {value: power for power, value in enumerate(exp)}
    return exp, log


class TestFieldAxioms:
    def test_tables_cover_every_nonzero_element(self):
        exp, log = gf256_tables()
        assert sorted(exp) == list(range(1, 256))
        assert len(log) == 255

    @pytest.mark.parametrize("a", range(1, 256))
    def test_every_inverse_in_gf256(self, a):
        exp, log = gf256_tables()
        inverse = gf_inv(a, 8)
        assert inverse == exp[(255 - log[a]) % 255]
        assert gf_mul(a, inverse, 8) == 1

    def test_full_multiplication_table_in_gf256(self):
        exp, log = gf256_tables()
        gf = field(8)
        elements = np.arange(1, 256)
        table = np.asarray(gf(elements)[:, None] * gf(elements)[None, :])
        logs = np.array([log[a] for a in elements])
        powers = (logs[:, None] + logs[None, :]) % 255
        assert np.array_equal(table, np.array(exp)[powers])

    @pytest.mark.parametrize("w", [8, 16])
    def test_every_element_is_its_own_negative(self, w):
        gf = field(w)
        elements = gf(np.arange(gf.order))
        assert not np.any(elements + elements)
        assert all(gf_add(a, a) == 0 for a in range(256))

    @pytest.mark.parametrize("w", [8, 16])
    def test_ring_laws_on_samples(self, w):
        gf = field(w)
        rng = np.random.default_rng(w)
        a, b, c = (gf(rng.integers(0, gf.order, 2000)) for _ in range(3))
        assert np.array_equal(a * b, b * a)
        assert np.array_equal(a + b, b + a)
        assert np.array_equal((a * b) * c, a * (b * c))
        assert np.array_equal((a + b) + c, a + (b + c))
        assert np.array_equal(a * (b + c), a * b + a * c)

    @pytest.mark.parametrize("w", [8, 16])
    def test_inverse_on_samples(self, w):
        rng = np.random.default_rng(100 + w)
        for a in rng.integers(1, 1 << w, 200).tolist():
            assert gf_mul(a, gf_inv(a, w), w) == 1
