"""
Problem Data
============
Seeded problem matrices with lazy generation and caching.
Every pipeline step reads A, X, G and C from the same instance.
"""

from typing import Any, Callable, Dict
import logging

import galois
import numpy as np

from ..coding.field import random_matrix
from ..coding.mds import GeneratorMatrix, encode, make_generator
from ..scheme.params import RatePair, SystemParams

logger = logging.getLogger(__name__)


class ProblemData:
    """
    Seeded data for one (params, rates) pair, generated on first access.

    Usage:
        data = ProblemData(params, rates, seed=7)

        # Access matrices as properties (lazily built)
        a = data.a
        coded = data.coded

        # Expected output for verification
        y = data.expected_output
    """

    def __init__(self, params: SystemParams, rates: RatePair, seed: int):
        """
        Initialize the instance.

        Args:
            params: Problem instance sizes and field width
            rates: Rate pair fixing the MDS generator
            seed: Seed of the data stream (A first, then X)
        """
        self.params = params
        self.rates = rates
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._cache: Dict[str, Any] = {}

    def _cached(self, name: str, build: Callable[[], Any]) -> Any:
        if name not in self._cache:
            self._cache[name] = build()
            logger.debug(f"Built {name} for seed {self.seed}")
        return self._cache[name]

    # ========================================================================
    # LAZY PROPERTIES
    # ========================================================================

    @property
    def a(self) -> galois.FieldArray:
        """Task matrix A, m x n."""
        p = self.params
        return self._cached('a', lambda: random_matrix(p.m, p.n, p.w, self._rng))

    @property
    def x(self) -> galois.FieldArray:
        """Input matrix X, n x N (drawn after A)."""
        p = self.params
        self.a  # draw order: A before X
        return self._cached('x', lambda: random_matrix(p.n, p.N, p.w, self._rng))

    @property
    def generator(self) -> GeneratorMatrix:
        """MDS generator of rate r1."""
        p = self.params
        return self._cached('generator', lambda: make_generator(p.m, self.rates.r1, p.w))

    @property
    def coded(self) -> galois.FieldArray:
        """Coded matrix C = G A, r1 m x n."""
        return self._cached('coded', lambda: encode(self.generator, self.a))

    @property
    def expected_output(self) -> galois.FieldArray:
        """Y = A X, computed centrally for verification."""
        return self._cached('expected_output', lambda: self.a @ self.x)
