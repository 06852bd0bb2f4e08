"""
Row Placement
=============
Assignment of the r1*m coded rows to r2-sized server subsets, per-server
storage, divisibility preflight and reconstructibility checks.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import count
import math
from typing import Dict, FrozenSet, Iterable, List, Tuple
import logging

import numpy as np

from ..errors import DivisibilityError, InfeasibleRatesError, InvalidParamsError
from ..utils.combinatorics import colex_rank, colex_subsets
from .params import RatePair, SystemParams
from .rates import LoadBreakdown, binomial, check_feasible, load_breakdown

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubsetIndex:
    """An r2-subset of [K] and its colex rank."""

    members: Tuple[int, ...]
    rank: int

    def __contains__(self, server: int) -> bool:
        return server in self.members


@dataclass(frozen=True)
class Block:
    """Coded rows [row_start, row_end) stored at every server of subset."""

    subset: SubsetIndex
    row_start: int
    row_end: int

    @property
    def rows(self) -> range:
        return range(self.row_start, self.row_end)


@dataclass(frozen=True)
class PlacementMap:
    """Partition of the coded rows into binom(K, r2) equal blocks, in colex order."""

    params: SystemParams
    rates: RatePair
    block_size: int
    blocks: Tuple[Block, ...]

    @property
    def coded_rows(self) -> int:
        return self.block_size * len(self.blocks)

    @property
    def rows_per_server(self) -> int:
        """|C_k| = block_size * binom(K-1, r2-1) = r1 r2 m / K."""
        return self.block_size * binomial(self.params.K - 1, self.rates.r2 - 1)

    @cached_property
    def holders(self) -> np.ndarray:
        """(K, coded_rows) boolean matrix; entry [k-1, row] is True when server k stores row."""
        matrix = np.zeros((self.params.K, self.coded_rows), dtype=bool)
        for block in self.blocks:
            matrix[np.asarray(block.subset.members) - 1, block.row_start:block.row_end] = True
        return matrix

    def block(self, members: Iterable[int]) -> Block:
        members = tuple(sorted(members))
        rank = colex_rank(members)
        if rank < len(self.blocks) and self.blocks[rank].subset.members == members:
            return self.blocks[rank]
        raise KeyError(f"no block stored at subset {members}")

    def to_dict(self) -> dict:
        return {
            'params': self.params.to_dict(),
            'rates': self.rates.to_dict(),
            'block_size': self.block_size,
            'blocks': [
                {'subset': list(b.subset.members), 'row_start': b.row_start, 'row_end': b.row_end}
                for b in self.blocks
            ],
        }


# ============================================================================
# DIVISIBILITY
# ============================================================================

@dataclass(frozen=True)
class DivisibilityVerdict:
    """
    Outcome of divisibility_check.

    When not ok, scaling m by m_multiplier and N by n_multiplier makes every
    block, phase and residual split come out even.
    """

    failures: Tuple[str, ...] = ()
    m_multiplier: int = 1
    n_multiplier: int = 1

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def _split_failures(p: SystemParams, r: RatePair, breakdown: LoadBreakdown, m: int, N: int) -> List[str]:
    K, q = p.K, p.q
    failures = []
    coded = r.r1 * m
    if coded.denominator != 1:
        failures.append(f"(i) r1*m = {coded} is not an integer")
    total_subsets = binomial(K, r.r2)
    block_size = coded / total_subsets
    if block_size.denominator != 1:
        failures.append(f"(ii) binom(K,r2) = {total_subsets} does not divide r1*m = {coded}")
    if N % q:
        failures.append(f"(iii) q = {q} does not divide N = {N}")
    columns = Fraction(N, q)

    for i in range(breakdown.s_max, breakdown.s_q - 1, -1):
        per_receiver = binomial(K - q, r.r2 - i) * block_size * columns
        if (per_receiver / i).denominator != 1:
            failures.append(f"(iv) phase {i}: {per_receiver} IVs per receiver do not split into {i} parts")

    gain = breakdown.residual_gain
    if gain is not None:
        residual = breakdown.residual_fraction * m * columns
        groups = binomial(q - 1, gain)
        per_group = residual / groups
        if residual.denominator != 1 or per_group.denominator != 1 or (per_group / gain).denominator != 1:
            failures.append(
                f"(v) residual phase {gain}: {residual} IVs per receiver do not split over "
                f"{groups} groups and {gain} senders"
            )
    return failures


def divisibility_check(p: SystemParams, r: RatePair) -> DivisibilityVerdict:
    """
    Verify that m and N split evenly into blocks, phases and residual groups.

    Returns:
        DivisibilityVerdict; on failure it carries the least m multiplier
        (with N first rounded up to a multiple of q)
    """
    breakdown = load_breakdown(p, r)
    failures = _split_failures(p, r, breakdown, p.m, p.N)
    if not failures:
        return DivisibilityVerdict()

    n_multiplier = p.q // math.gcd(p.q, p.N)
    # Every split is linear in m, so some multiple of m always clears them
    for m_multiplier in count(1):
        if not _split_failures(p, r, breakdown, p.m * m_multiplier, p.N * n_multiplier):
            break
    logger.debug(f"Divisibility failed for {r}: scale m by {m_multiplier}, N by {n_multiplier}")
    return DivisibilityVerdict(tuple(failures), m_multiplier, n_multiplier)


# ============================================================================
# PLACEMENT
# ============================================================================

def partition_rows(p: SystemParams, r: RatePair) -> PlacementMap:
    """
    Split the r1*m coded rows into contiguous blocks, one per r2-subset.

    Block b in colex rank order owns rows [b*block_size, (b+1)*block_size).

    Raises:
        InfeasibleRatesError: if the rate pair is infeasible
        DivisibilityError: if the instance does not split evenly
    """
    verdict = check_feasible(p, r)
    if not verdict.ok:
        raise InfeasibleRatesError(verdict.violations)
    split = divisibility_check(p, r)
    if not split.ok:
        raise DivisibilityError(split)

    subsets = colex_subsets(p.K, r.r2)
    block_size = int(r.r1 * p.m) // len(subsets)
    ranks = [colex_rank(members) for members in subsets]
    blocks = tuple(
        Block(SubsetIndex(members, rank), rank * block_size, (rank + 1) * block_size)
        for members, rank in zip(subsets, ranks)
    )
    placement = PlacementMap(p, r, block_size, blocks)
    logger.info(
        f"Placed {placement.coded_rows} coded rows in {len(blocks)} blocks of {block_size}; "
        f"{placement.rows_per_server} rows per server"
    )
    return placement


def server_rows(pm: PlacementMap, k: int) -> FrozenSet[int]:
    """Coded rows stored at server k: the union of blocks whose subset contains k."""
    if not 1 <= k <= pm.params.K:
        raise InvalidParamsError(f"server {k} outside [1, {pm.params.K}]")
    return frozenset(np.flatnonzero(pm.holders[k - 1]).tolist())


def reconstructible(pm: PlacementMap, non_stragglers: Iterable[int]) -> bool:
    """True iff the given q servers jointly store at least m distinct coded rows."""
    non_stragglers = tuple(non_stragglers)
    if len(non_stragglers) != pm.params.q:
        raise InvalidParamsError(f"expected {pm.params.q} non-stragglers, got {len(non_stragglers)}")
    if not all(1 <= k <= pm.params.K for k in non_stragglers):
        raise InvalidParamsError(f"non-stragglers {list(non_stragglers)} outside [1, {pm.params.K}]")
    stored = pm.holders[np.asarray(non_stragglers) - 1].any(axis=0)
    return int(stored.sum()) >= pm.params.m


def redundancy_census(pm: PlacementMap, non_stragglers: Iterable[int], k: int) -> Dict[int, int]:
    """
    Rows missing at server k, grouped by how many of the other non-stragglers store them.

    Returns:
        {j: number of coded rows not at k stored at exactly j servers of Q minus k}
    """
    others = set(non_stragglers) - {k}
    census = Counter()
    for block in pm.blocks:
        if k in block.subset:
            continue
        census[len(others.intersection(block.subset.members))] += pm.block_size
    return dict(census)
