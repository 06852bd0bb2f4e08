"""
Rates and Communication Load
============================
Closed-form machinery of the concatenated scheme: binomial conventions,
feasibility of a rate pair, the achievable load with its per-phase terms,
and exhaustive rate optimization against the fixed-rate baseline.

All arithmetic is exact (Python ints and Fractions).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
from typing import Dict, List, Optional, Tuple
import logging

from ..errors import InfeasibleRatesError, InvalidParamsError
from ..utils.serialization import fraction_fields
from .params import RatePair, SystemParams

logger = logging.getLogger(__name__)

CONDITION_DOMAIN = '12a'
CONDITION_STORAGE = '12b'
CONDITION_RECONSTRUCTION = '12c'

CONDITION_TEXT = {
    CONDITION_DOMAIN: 'q*r1 in [q:K] and r2 in [floor(q*mu):floor(K*mu)]',
    CONDITION_STORAGE: 'r1*r2 <= K*mu',
    CONDITION_RECONSTRUCTION: 'binom(K,r2) - binom(K-q,r2) >= binom(K,r2)/r1',
}

CASE_REPETITION = 'repetition'
CASE_MDS = 'mds'


@lru_cache(maxsize=None)
def binomial(a: int, b: int) -> int:
    """Binomial coefficient with binom(a, b) = 0 when a < b or b < 0."""
    if b < 0 or a < b:
        return 0
    return math.comb(a, b)


# ============================================================================
# FEASIBILITY
# ============================================================================

@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of check_feasible; empty violations means feasible."""

    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "feasible"
        return "; ".join(f"violates {c}: {CONDITION_TEXT[c]}" for c in self.violations)


def _require_same_q(p: SystemParams, r: RatePair) -> None:
    if r.q != p.q:
        raise InvalidParamsError(f"rate pair built for q={r.q} used with q={p.q}")


def check_feasible(p: SystemParams, r: RatePair) -> FeasibilityVerdict:
    """
    Check the sufficient conditions for a rate pair to yield a feasible policy.

    Args:
        p: Problem instance
        r: Candidate rate pair

    Returns:
        FeasibilityVerdict listing the violated conditions (12a, 12b, 12c)
    """
    _require_same_q(p, r)
    K, q, mu = p.K, p.q, p.mu
    violations = []

    if not (q <= r.l <= K and math.floor(q * mu) <= r.r2 <= math.floor(K * mu)):
        violations.append(CONDITION_DOMAIN)
    if r.r1 * r.r2 > K * mu:
        violations.append(CONDITION_STORAGE)
    # r1 * (binom(K,r2) - binom(K-q,r2)) >= binom(K,r2), scaled by q
    total = binomial(K, r.r2)
    if r.l * (total - binomial(K - q, r.r2)) < q * total:
        violations.append(CONDITION_RECONSTRUCTION)

    return FeasibilityVerdict(tuple(violations))


def baseline_rates(p: SystemParams) -> RatePair:
    """Fixed-rate baseline: r1 = K/q, r2 = floor(q*mu)."""
    return RatePair(l=p.K, r2=math.floor(p.q * p.mu), q=p.q)


def uncoded_rates(p: SystemParams) -> Optional[RatePair]:
    """
    MDS-free choice (r1=1, r2=floor(K*mu)), available when K - q < floor(K*mu).

    Returns:
        The rate pair, or None when repetition alone cannot cover the stragglers
    """
    r2 = math.floor(p.K * p.mu)
    if p.K - p.q < r2:
        return RatePair(l=p.q, r2=r2, q=p.q)
    return None


def reconstruction_case(p: SystemParams, r: RatePair) -> str:
    """Repetition alone covers the stragglers when r2 > K - q; otherwise MDS decoding is needed."""
    return CASE_REPETITION if r.r2 > p.K - p.q else CASE_MDS


def effective_storage(p: SystemParams, r: RatePair) -> Fraction:
    """Storage fraction seen by the MDS code, mu / r2."""
    return p.mu / r.r2


def enumerate_feasible(p: SystemParams) -> List[RatePair]:
    """All feasible (l, r2) in the domain grid, in lexicographic (l, r2) order."""
    r2_low = math.floor(p.q * p.mu)
    r2_high = math.floor(p.K * p.mu)
    pairs = []
    for l in range(p.q, p.K + 1):
        for r2 in range(r2_low, r2_high + 1):
            pair = RatePair(l=l, r2=r2, q=p.q)
            if check_feasible(p, pair).ok:
                pairs.append(pair)
    return pairs


# ============================================================================
# LOAD
# ============================================================================

@dataclass(frozen=True)
class LoadBreakdown:
    """
    Achievable load of one rate pair with its per-phase terms.

    b maps a redundancy j in [s_min, s_max] to B_j, the fraction of m coded
    rows a server needs that are stored at exactly j other non-stragglers.
    phase_loads maps each regular phase gain j in [s_q, s_max] to N*B_j/j.
    residual_load is the extra phase at gain s_q - 1.
    """

    params: SystemParams
    rates: RatePair
    s_max: int
    s_min: int
    s_q: int
    b: Dict[int, Fraction]
    phase_loads: Dict[int, Fraction]
    residual_load: Fraction
    total: Fraction
    need: Fraction
    delivered: Fraction
    case: str = CASE_MDS

    @property
    def residual_fraction(self) -> Fraction:
        """Fraction of m rows per column still missing after the regular phases."""
        return self.need - self.delivered

    @property
    def residual_gain(self) -> Optional[int]:
        """Gain of the extra phase, or None when nothing is left after the regular phases."""
        if self.residual_fraction == 0:
            return None
        return self.s_q - 1

    def _per_server(self, fraction: Fraction, m: Optional[int] = None) -> Fraction:
        m = self.params.m if m is None else m
        return fraction * m * Fraction(self.params.N, self.params.q)

    def needed_ivs(self, m: Optional[int] = None) -> Fraction:
        """IVs each non-straggler must receive, m(1 - r1 r2/K) N/q."""
        return self._per_server(self.need, m)

    def regular_ivs(self, m: Optional[int] = None) -> Fraction:
        """IVs each non-straggler receives in phases s_max..s_q (z)."""
        return self._per_server(self.delivered, m)

    def residual_ivs(self, m: Optional[int] = None) -> Fraction:
        """IVs each non-straggler receives in the extra phase (l)."""
        return self._per_server(self.residual_fraction, m)

    def to_dict(self) -> dict:
        return {
            'rates': self.rates.to_dict(),
            's_min': self.s_min,
            's_max': self.s_max,
            's_q': self.s_q,
            'case': self.case,
            'B': {str(j): fraction_fields(v) for j, v in self.b.items()},
            'phase_loads': {str(j): fraction_fields(v) for j, v in self.phase_loads.items()},
            'residual_load': fraction_fields(self.residual_load),
            'total': fraction_fields(self.total),
        }


def redundancy_bounds(p: SystemParams, r2: int) -> Tuple[int, int]:
    """(s_min, s_max) = (max(r2 - (K - q), 1), min(q - 1, r2))."""
    return max(r2 - (p.K - p.q), 1), min(p.q - 1, r2)


def find_s_q(b: Dict[int, Fraction], s_min: int, s_max: int, need: Fraction) -> Tuple[int, Fraction]:
    """
    Smallest s in [s_min, s_max + 1] whose tail sum of B_j stays within need.

    Returns:
        (s_q, tail sum from s_q to s_max)
    """
    s, tail = s_max + 1, Fraction(0)
    while s - 1 >= s_min and tail + b[s - 1] <= need:
        s -= 1
        tail += b[s]
    return s, tail


def load_breakdown(p: SystemParams, r: RatePair) -> LoadBreakdown:
    """
    Achievable load of a feasible rate pair, with every intermediate term.

    Raises:
        InfeasibleRatesError: if the pair fails check_feasible
    """
    verdict = check_feasible(p, r)
    if not verdict.ok:
        raise InfeasibleRatesError(verdict.violations)

    K, q, N = p.K, p.q, p.N
    r1, r2 = r.r1, r.r2
    s_min, s_max = redundancy_bounds(p, r2)
    total_subsets = binomial(K, r2)

    b = {
        j: r1 * binomial(q - 1, j) * binomial(K - q, r2 - j) / total_subsets
        for j in range(s_min, s_max + 1)
    }
    need = 1 - r1 * r2 / K
    s_q, delivered = find_s_q(b, s_min, s_max, need)

    phase_loads = {j: N * b[j] / j for j in range(s_max, s_q - 1, -1)}
    remainder = need - delivered
    if s_q == s_min:
        # Every reachable IV is needed once s_q hits s_min
        assert remainder == 0, f"nonzero remainder {remainder} at s_q = s_min"
    residual_load = Fraction(0) if remainder == 0 else N * remainder / (s_q - 1)

    return LoadBreakdown(
        params=p,
        rates=r,
        s_max=s_max,
        s_min=s_min,
        s_q=s_q,
        b=b,
        phase_loads=phase_loads,
        residual_load=residual_load,
        total=sum(phase_loads.values(), Fraction(0)) + residual_load,
        need=need,
        delivered=delivered,
        case=reconstruction_case(p, r),
    )


def phase_message_count(p: SystemParams, r: RatePair, i: int, m: Optional[int] = None) -> Fraction:
    """
    Closed-form number of messages in regular phase i:
    binom(q, i+1) (i+1) binom(K-q, r2-i) |C_K| (N/q) / i.
    """
    m = p.m if m is None else m
    block_size = r.r1 * m / binomial(p.K, r.r2)
    groups = binomial(p.q, i + 1)
    per_receiver = binomial(p.K - p.q, r.r2 - i) * block_size * Fraction(p.N, p.q)
    return groups * (i + 1) * per_receiver / i


# ============================================================================
# OPTIMIZATION
# ============================================================================

@lru_cache(maxsize=4096)
def _redundancy_table(K: int, q: int, r2: int):
    """Integer numerators b_j = binom(q-1,j) binom(K-q,r2-j) and weighted tails, per (K, q, r2)."""
    s_min, s_max = max(r2 - (K - q), 1), min(q - 1, r2)
    counts = {j: binomial(q - 1, j) * binomial(K - q, r2 - j) for j in range(s_min, s_max + 1)}
    tail_counts = {s_max + 1: 0}
    tail_weighted = {s_max + 1: Fraction(0)}
    for j in range(s_max, s_min - 1, -1):
        tail_counts[j] = tail_counts[j + 1] + counts[j]
        tail_weighted[j] = tail_weighted[j + 1] + Fraction(counts[j], j)
    return binomial(K, r2), s_min, s_max, tail_counts, tail_weighted


def fast_total_load(p: SystemParams, r: RatePair) -> Fraction:
    """
    Same value as load_breakdown(p, r).total without materializing B_j.

    Used by the exhaustive sweeps; the s_q search is done on integer
    numerators so only two Fractions are built per pair.
    """
    K, q, N, l, r2 = p.K, p.q, p.N, r.l, r.r2
    total_subsets, s_min, s_max, tail_counts, tail_weighted = _redundancy_table(K, q, r2)
    # sum_{j>=s} B_j <= need  <=>  l * tail * K <= binom(K,r2) * (qK - l r2)
    budget = total_subsets * (q * K - l * r2)
    s = s_max + 1
    while s - 1 >= s_min and l * tail_counts[s - 1] * K <= budget:
        s -= 1
    regular = Fraction(N * l, q * total_subsets) * tail_weighted[s]
    remainder_num = budget - l * tail_counts[s] * K
    if remainder_num == 0:
        return regular
    return regular + Fraction(N * remainder_num, q * K * total_subsets * (s - 1))


def optimize_rates(p: SystemParams) -> Tuple[RatePair, LoadBreakdown]:
    """
    Exhaustively minimize the achievable load over the feasible rate pairs.

    Ties go to the smaller l, then the larger r2.
    """
    candidates = enumerate_feasible(p)
    if not candidates:
        raise InfeasibleRatesError((CONDITION_DOMAIN,), f"no feasible rate pair for {p}")
    best = min(candidates, key=lambda pair: (fast_total_load(p, pair), pair.l, -pair.r2))
    logger.debug(f"Optimal rates for q={p.q}: {best} among {len(candidates)} feasible pairs")
    return best, load_breakdown(p, best)
