"""
Problem Parameters
==================
SystemParams (the full problem instance) and RatePair (MDS numerator l with
r1 = l / q, repetition rate r2).
"""

from dataclasses import dataclass, replace
from fractions import Fraction
import math
from typing import Union

from ..config import DEFAULT_FIELD_WIDTH, DEFAULT_INNER_DIMENSION, SUPPORTED_FIELD_WIDTHS
from ..errors import InvalidParamsError


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse a storage fraction such as "1/2" exactly.

    Raises:
        InvalidParamsError: if the text is not a rational number
    """
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise InvalidParamsError(f"not an exact fraction: {text!r}") from e


@dataclass(frozen=True)
class SystemParams:
    """One problem instance: K servers, q non-stragglers, storage fraction mu, Y = A X sizes."""

    K: int
    q: int
    mu: Fraction
    m: int
    N: int
    n: int = DEFAULT_INNER_DIMENSION
    w: int = DEFAULT_FIELD_WIDTH

    def __post_init__(self):
        object.__setattr__(self, 'mu', parse_fraction(self.mu))
        for name in ('K', 'q', 'm', 'n', 'N'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidParamsError(f"{name} must be a positive integer, got {value!r}")
        if not Fraction(1, self.K) <= self.mu <= 1:
            raise InvalidParamsError(f"mu={self.mu} outside [1/K, 1] for K={self.K}")
        if not self.q_min <= self.q <= self.K:
            raise InvalidParamsError(f"q={self.q} outside [{self.q_min}, {self.K}]")
        if self.w not in SUPPORTED_FIELD_WIDTHS:
            raise InvalidParamsError(f"field width w={self.w} not in {SUPPORTED_FIELD_WIDTHS}")

    @property
    def q_min(self) -> int:
        """Smallest admissible q, ceil(1/mu)."""
        return math.ceil(1 / self.mu)

    @property
    def storage_rows(self) -> Fraction:
        """Rows each server may store, m * mu."""
        return self.m * self.mu

    def with_q(self, q: int) -> 'SystemParams':
        return replace(self, q=q)

    def scaled(self, m_multiplier: int = 1, n_multiplier: int = 1) -> 'SystemParams':
        return replace(self, m=self.m * m_multiplier, N=self.N * n_multiplier)

    def to_dict(self) -> dict:
        return {
            'K': self.K,
            'q': self.q,
            'mu': f"{self.mu.numerator}/{self.mu.denominator}",
            'm': self.m,
            'n': self.n,
            'N': self.N,
            'w': self.w,
        }


@dataclass(frozen=True, order=True)
class RatePair:
    """MDS rate r1 = l / q and integer repetition rate r2."""

    l: int
    r2: int
    q: int

    @property
    def r1(self) -> Fraction:
        return Fraction(self.l, self.q)

    def to_dict(self) -> dict:
        return {
            'l': self.l,
            'r2': self.r2,
            'r1': f"{self.r1.numerator}/{self.r1.denominator}",
        }

    def __str__(self) -> str:
        return f"(r1={self.r1}, r2={self.r2})"
