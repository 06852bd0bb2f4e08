"""
Subset Enumeration Utilities
============================
Colexicographic ranking of r-subsets of the 1-based server set [K].
"""

from itertools import combinations
from math import comb
from typing import Iterable, List, Sequence, Tuple


def colex_rank(members: Iterable[int]) -> int:
    """
    Rank of a subset among all subsets of the same size in colex order.

    Args:
        members: Distinct 1-based server ids

    Returns:
        sum over the sorted members c_1 < ... < c_r of binom(c_i - 1, i)
    """
    return sum(comb(c - 1, i) for i, c in enumerate(sorted(members), start=1))


def colex_unrank(rank: int, size: int) -> Tuple[int, ...]:
    """Inverse of colex_rank for subsets of the given size."""
    members = []
    for i in range(size, 0, -1):
        c = i
        while comb(c, i) <= rank:
            c += 1
        members.append(c)
        rank -= comb(c - 1, i)
    return tuple(sorted(members))


def colex_subsets(universe_size: int, size: int) -> List[Tuple[int, ...]]:
    """All size-subsets of {1..universe_size}, in colex order (rank 0 first)."""
    return [colex_unrank(rank, size) for rank in range(comb(universe_size, size))]


def colex_subsets_of(items: Sequence[int], size: int) -> List[Tuple[int, ...]]:
    """All size-subsets of an arbitrary id set, sorted in colex order."""
    return sorted(combinations(sorted(items), size), key=lambda s: s[::-1])
