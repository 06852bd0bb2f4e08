"""
Straggler Model
===============
Seeded shifted-exponential map-phase finish times and the Monte Carlo check
of the latency formula.
"""

from dataclasses import dataclass
from typing import Optional, Tuple
import logging

import numpy as np

from ..errors import InvalidParamsError
from ..scheme.latency import latency
from ..scheme.params import SystemParams

logger = logging.getLogger(__name__)

SHIFTED_EXPONENTIAL = 'shifted-exponential'
FIXED = 'fixed'

# Second SeedSequence word, keeps finish times apart from the data stream of the same seed
STRAGGLER_STREAM = 1


@dataclass(frozen=True)
class StragglerModel:
    """
    How the non-straggler set is chosen.

    shifted-exponential: K i.i.d. times with CDF 1 - exp(-(t/(mu N) - 1)), t >= mu N
    fixed: the non-stragglers are given explicitly
    """

    kind: str = SHIFTED_EXPONENTIAL
    seed: int = 0
    fixed: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in (SHIFTED_EXPONENTIAL, FIXED):
            raise InvalidParamsError(f"unknown straggler model {self.kind!r}")
        if self.kind == FIXED and not self.fixed:
            raise InvalidParamsError("fixed straggler model needs the non-straggler set")

    @classmethod
    def fixed_set(cls, servers) -> 'StragglerModel':
        return cls(kind=FIXED, fixed=tuple(sorted(servers)))

    @staticmethod
    def shift(p: SystemParams) -> float:
        return float(p.mu * p.N)

    @staticmethod
    def mean(p: SystemParams) -> float:
        return 2 * float(p.mu * p.N)


def draw_finish_times(p: SystemParams, rng: np.random.Generator, size=None) -> np.ndarray:
    """Inverse-CDF draws t = mu N (1 - ln u), u uniform on (0, 1]."""
    shape = (p.K,) if size is None else (size, p.K)
    u = 1.0 - rng.random(shape)
    return StragglerModel.shift(p) * (1.0 - np.log(u))


def sample_stragglers(p: SystemParams, model: StragglerModel) -> Tuple[Tuple[int, ...], Optional[np.ndarray]]:
    """
    Pick the q non-stragglers.

    Returns:
        (ascending 1-based server ids of the q fastest, finish times or None for a fixed set);
        ties go to the smaller server id
    """
    if model.kind == FIXED:
        servers = tuple(sorted(model.fixed))
        if len(servers) != p.q or not all(1 <= k <= p.K for k in servers):
            raise InvalidParamsError(f"fixed set {list(servers)} is not {p.q} servers of [1, {p.K}]")
        if len(set(servers)) != p.q:
            raise InvalidParamsError(f"fixed set {list(servers)} repeats a server")
        return servers, None

    times = draw_finish_times(p, np.random.default_rng([model.seed, STRAGGLER_STREAM]))
    order = np.argsort(times, kind='stable')
    servers = tuple(sorted(int(i) + 1 for i in order[:p.q]))
    logger.debug(f"Sampled non-stragglers {list(servers)} (q-th finish {times[order[p.q - 1]]:.3f})")
    return servers, times


@dataclass(frozen=True)
class LatencyEstimate:
    q: int
    trials: int
    empirical: float
    analytic: float

    @property
    def relative_error(self) -> float:
        return abs(self.empirical - self.analytic) / self.analytic


def monte_carlo_latency(p: SystemParams, q: int, trials: int, seed: int) -> LatencyEstimate:
    """Mean q-th order statistic of K shifted-exponential draws versus D(q)."""
    if trials < 1:
        raise InvalidParamsError(f"trials must be at least 1, got {trials}")
    if not 1 <= q <= p.K:
        raise InvalidParamsError(f"q={q} outside [1, {p.K}]")
    times = draw_finish_times(p, np.random.default_rng(seed), size=trials)
    qth = np.partition(times, q - 1, axis=1)[:, q - 1]
    return LatencyEstimate(q, trials, float(qth.mean()), latency(p, q))
