"""
Finite Field Arithmetic
=======================
GF(2^w) arithmetic for w in {8, 16} under fixed reducing polynomials.

Field classes come from `galois`; matrices over the field are galois
FieldArrays (2-D), which play the role of FieldMatrix throughout the package.
"""

from functools import lru_cache
from typing import Type

import galois
import numpy as np

from ..config import FIELD_DTYPES, REDUCING_POLYNOMIALS, SUPPORTED_FIELD_WIDTHS
from ..errors import DimensionError, FieldWidthError, FieldZeroDivisionError


@lru_cache(maxsize=None)
def field(w: int) -> Type[galois.FieldArray]:
    """
    Return the GF(2^w) array class for a supported width.

    Args:
        w: Field width in bits (8 or 16)

    Returns:
        galois FieldArray subclass built on the fixed reducing polynomial
    """
    if w not in SUPPORTED_FIELD_WIDTHS:
        raise FieldWidthError(f"unsupported field width {w}; expected one of {SUPPORTED_FIELD_WIDTHS}")
    return galois.GF(2 ** w, irreducible_poly=REDUCING_POLYNOMIALS[w])


def _element(value: int, w: int):
    gf = field(w)
    if not 0 <= int(value) < gf.order:
        raise ValueError(f"{value} is not an element of GF(2^{w})")
    return gf(int(value))


def gf_add(a: int, b: int) -> int:
    """Field addition, which is bitwise exclusive-or in characteristic 2."""
    return int(a) ^ int(b)


def gf_mul(a: int, b: int, w: int) -> int:
    """
    Multiply two field elements.

    Args:
        a, b: Elements as w-bit unsigned integers
        w: Field width

    Returns:
        The product reduced by the field's polynomial
    """
    return int(_element(a, w) * _element(b, w))


def gf_inv(a: int, w: int) -> int:
    """
    Multiplicative inverse of a nonzero element.

    Raises:
        FieldZeroDivisionError: if a is zero
    """
    if int(a) == 0:
        raise FieldZeroDivisionError(f"0 has no inverse in GF(2^{w})")
    return int(np.reciprocal(_element(a, w)))


def field_matrix(values, w: int) -> galois.FieldArray:
    """Wrap a 2-D integer array as a matrix over GF(2^w)."""
    array = np.asarray(values, dtype=np.int64)
    if array.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {array.shape}")
    return field(w)(array)


def random_matrix(rows: int, cols: int, w: int, rng: np.random.Generator) -> galois.FieldArray:
    """Draw a matrix with entries uniform over the full field, zero included."""
    return field(w)(rng.integers(0, 2 ** w, size=(rows, cols), dtype=np.int64))


def matrix_to_bytes(matrix: galois.FieldArray, w: int) -> bytes:
    """Serialize row-major as w-bit little-endian unsigned integers."""
    return np.ascontiguousarray(np.asarray(matrix, dtype=FIELD_DTYPES[w])).tobytes()


def matrix_from_bytes(data: bytes, rows: int, cols: int, w: int) -> galois.FieldArray:
    """Inverse of matrix_to_bytes."""
    flat = np.frombuffer(data, dtype=FIELD_DTYPES[w])
    if flat.size != rows * cols:
        raise DimensionError(f"{flat.size} entries cannot fill a {rows}x{cols} matrix")
    return field(w)(flat.astype(np.int64).reshape(rows, cols))
