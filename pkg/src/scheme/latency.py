"""
Latency Model and Trade-off Curve
=================================
Expected map-phase latency D(q) under shifted-exponential service times and
the load-versus-latency sweep over every admissible q.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional
import logging

from ..errors import InfeasibleRatesError
from .params import RatePair, SystemParams
from .rates import baseline_rates, check_feasible, fast_total_load, optimize_rates

logger = logging.getLogger(__name__)


def latency(p: SystemParams, q: int) -> float:
    """
    Average time for the first q of K servers to finish the map phase.

    Args:
        p: Problem instance (K, mu and N are used)
        q: Number of servers waited for, 1 <= q <= K

    Returns:
        mu N (1 + sum_{j=K-q+1}^{K} 1/j)
    """
    if not 1 <= q <= p.K:
        raise ValueError(f"q={q} outside [1, {p.K}]")
    harmonic = sum(1.0 / j for j in range(p.K - q + 1, p.K + 1))
    return float(p.mu * p.N) * (1.0 + harmonic)


@dataclass(frozen=True)
class TradeoffPoint:
    """One row of the trade-off curve."""

    q: int
    latency: float
    optimized_load: Fraction
    baseline_load: Fraction
    optimized_rates: RatePair

    @property
    def gain(self) -> Fraction:
        """Baseline load over optimized load (1 when the loads coincide)."""
        if self.optimized_load == 0:
            return Fraction(1)
        return self.baseline_load / self.optimized_load


@dataclass(frozen=True)
class TradeoffCurve:
    points: List[TradeoffPoint]
    skipped: List[int]

    def nearest(self, target_latency: float) -> TradeoffPoint:
        """Point whose D(q) is closest to the target (smaller q on ties)."""
        return min(self.points, key=lambda point: (abs(point.latency - target_latency), point.q))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def tradeoff_point(p: SystemParams) -> Optional[TradeoffPoint]:
    """Optimized and baseline loads at p.q, or None when no rate pair is feasible."""
    try:
        best, breakdown = optimize_rates(p)
    except InfeasibleRatesError:
        return None
    baseline = baseline_rates(p)
    if not check_feasible(p, baseline).ok:
        logger.warning(f"Baseline rates {baseline} infeasible at q={p.q}")
        return None
    return TradeoffPoint(
        q=p.q,
        latency=latency(p, p.q),
        optimized_load=breakdown.total,
        baseline_load=fast_total_load(p, baseline),
        optimized_rates=best,
    )


def tradeoff_curve(p: SystemParams) -> TradeoffCurve:
    """
    Sweep q over [ceil(1/mu), K]; p.q is ignored.

    q values without a feasible pair are skipped and listed in the result.
    """
    points, skipped = [], []
    for q in range(p.q_min, p.K + 1):
        point = tradeoff_point(p.with_q(q))
        if point is None:
            logger.warning(f"Skipping q={q}: no feasible rate pair")
            skipped.append(q)
            continue
        points.append(point)
    logger.info(f"Trade-off curve for K={p.K}: {len(points)} points, {len(skipped)} skipped")
    return TradeoffCurve(points, skipped)
