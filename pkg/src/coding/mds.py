"""
MDS Outer Code
==============
Vandermonde generator construction, encoding of A, and erasure decoding from
any m distinct coded rows.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple
import logging

import galois
import numpy as np

from ..errors import CodeConstructionError, DimensionError, InsufficientRowsError
from .field import field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorMatrix:
    """
    The (m', m) generator G with m' = r1 * m.

    evaluation_points is None for the rate-1 identity code; otherwise row i
    is (x_i^0, x_i^1, ..., x_i^(m-1)) with x_i = i.
    """

    codeword_length: int
    message_length: int
    w: int
    matrix: galois.FieldArray
    evaluation_points: Optional[Tuple[int, ...]] = None

    @property
    def is_identity(self) -> bool:
        return self.evaluation_points is None

    def rows(self, row_ids: Iterable[int]) -> galois.FieldArray:
        return self.matrix[list(row_ids), :]


def make_generator(m: int, r1: Fraction, w: int) -> GeneratorMatrix:
    """
    Build the Vandermonde generator of an (r1*m, m) MDS code.

    Args:
        m: Number of message rows (rows of A)
        r1: Exact code rate numerator over q, r1 >= 1
        w: Field width

    Returns:
        GeneratorMatrix; the identity when r1 == 1
    """
    r1 = Fraction(r1)
    if r1 < 1:
        raise CodeConstructionError(f"code rate r1={r1} must be at least 1")
    length = r1 * m
    if length.denominator != 1:
        raise CodeConstructionError(f"codeword length r1*m = {length} is not an integer")
    length = int(length)
    gf = field(w)
    if length > gf.order:
        raise CodeConstructionError(f"GF(2^{w}) has {gf.order} elements, need {length} evaluation points")

    if r1 == 1:
        return GeneratorMatrix(length, m, w, gf.Identity(m))

    points = gf(np.arange(length, dtype=np.int64))
    matrix = gf.Ones((length, m))
    for col in range(1, m):
        matrix[:, col] = matrix[:, col - 1] * points
    logger.debug(f"Built {length}x{m} Vandermonde generator over GF(2^{w})")
    return GeneratorMatrix(length, m, w, matrix, tuple(range(length)))


def encode(generator: GeneratorMatrix, a: galois.FieldArray) -> galois.FieldArray:
    """Return C = G A."""
    if a.shape[0] != generator.message_length:
        raise DimensionError(
            f"A has {a.shape[0]} rows but the generator expects {generator.message_length}"
        )
    return generator.matrix @ a


def decode_batch(generator: GeneratorMatrix, row_ids: np.ndarray, coded_values: np.ndarray) -> galois.FieldArray:
    """
    Solve many erasure-decoding systems at once.

    Row s of row_ids lists m distinct coded rows and row s of coded_values
    holds one column's IVs at those rows. For the Vandermonde code this is
    polynomial interpolation at the points x = row id: Newton divided
    differences, then expansion of the Newton form into monomial
    coefficients, each step vectorized over every system.

    Args:
        generator: The code's generator
        row_ids: (S, m) coded-row indices, distinct within a row
        coded_values: (S, m) field elements aligned with row_ids

    Returns:
        (S, m) FieldArray; row s is the decoded message column of system s
    """
    gf = field(generator.w)
    m = generator.message_length
    row_ids = np.asarray(row_ids, dtype=np.int64)
    coded_values = np.asarray(coded_values, dtype=np.int64)
    if row_ids.ndim != 2 or row_ids.shape[1] != m or coded_values.shape != row_ids.shape:
        raise DimensionError(f"decode systems need (S, {m}) row ids and values, got "
                             f"{row_ids.shape} and {coded_values.shape}")
    if row_ids.size and (row_ids.min() < 0 or row_ids.max() >= generator.codeword_length):
        raise DimensionError(f"coded rows must lie in [0, {generator.codeword_length})")
    ordered = np.sort(row_ids, axis=1)
    if m > 1 and (ordered[:, 1:] == ordered[:, :-1]).any():
        raise InsufficientRowsError(f"decode systems need {m} distinct coded rows each")

    if generator.is_identity:
        message = np.empty_like(coded_values)
        np.put_along_axis(message, row_ids, coded_values, axis=1)
        return gf(message)

    x = gf(row_ids)
    diffs = gf(coded_values)
    for k in range(1, m):
        diffs[:, k:] = (diffs[:, k:] - diffs[:, k - 1:-1]) / (x[:, k:] - x[:, :-k])

    # Horner on the Newton form: c <- c (z - x_j) + d_j, highest j first
    coeffs = gf.Zeros(diffs.shape)
    coeffs[:, 0] = diffs[:, m - 1]
    for j in range(m - 2, -1, -1):
        t = m - 1 - j
        low = x[:, j:j + 1] * coeffs[:, :t]
        coeffs[:, 1:t + 1] = coeffs[:, :t].copy()
        coeffs[:, 0] = 0
        coeffs[:, :t] = coeffs[:, :t] - low
        coeffs[:, 0] = coeffs[:, 0] + diffs[:, j]
    return coeffs


def decode_rows(generator: GeneratorMatrix, row_ids: Iterable[int],
                coded_values: galois.FieldArray) -> galois.FieldArray:
    """
    Recover the message block from coded rows.

    Args:
        generator: The code's generator
        row_ids: Coded-row indices, aligned with the rows of coded_values
        coded_values: One row of field elements per entry of row_ids

    Returns:
        The m-row message block consistent with the given coded rows. When
        more than m rows are supplied the m smallest indices are used.
    """
    row_ids = [int(r) for r in row_ids]
    m = generator.message_length
    if coded_values.ndim != 2 or coded_values.shape[0] != len(row_ids):
        raise DimensionError(f"{len(row_ids)} row ids for coded values of shape {coded_values.shape}")

    first_position = {}
    for position, row in enumerate(row_ids):
        if not 0 <= row < generator.codeword_length:
            raise DimensionError(f"coded row {row} outside [0, {generator.codeword_length})")
        first_position.setdefault(row, position)
    if len(first_position) < m:
        raise InsufficientRowsError(f"{len(first_position)} distinct coded rows supplied, need {m}")

    chosen = sorted(first_position)[:m]
    values = np.asarray(coded_values[[first_position[row] for row in chosen], :], dtype=np.int64)
    columns = values.shape[1]
    systems = np.broadcast_to(np.asarray(chosen, dtype=np.int64), (columns, m))
    return decode_batch(generator, systems, values.T).T
