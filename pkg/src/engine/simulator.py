"""
Map-Shuffle-Reduce Simulator
============================
End-to-end execution of the scheme on one process: map products at every
server, the coded shuffle as a global ordered transcript, MDS decoding at
each non-straggler and an entrywise check of Y = A X.

Stores, plans and transcripts are numpy arrays, so a phase is encoded and
decoded in a few vectorized steps and the reduce step of many straggler
sets is one batched interpolation.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import hashlib
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple
import logging

import galois
import numpy as np

from ..coding.mds import GeneratorMatrix, decode_batch
from ..config import FIELD_DTYPES
from ..data.instance import ProblemData
from ..errors import (
    CodedShuffleError,
    DimensionError,
    DivisibilityError,
    InfeasibleRatesError,
    InsufficientRowsError,
    InvalidParamsError,
    PipelineError,
)
from ..scheme.params import RatePair, SystemParams
from ..scheme.placement import PlacementMap, divisibility_check, partition_rows
from ..scheme.rates import check_feasible, load_breakdown
from ..scheme.shuffle import (
    IVStore,
    MulticastMessage,
    ReduceAssignment,
    ShufflePlan,
    assign_reduce,
    build_plan,
    deliver,
    plan_load,
    transmit,
)
from ..utils.serialization import fraction_fields
from .stragglers import StragglerModel, sample_stragglers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TranscriptEntry:
    """One transmitted message with its payload, in transmission order."""

    phase: int
    residual: bool
    message: MulticastMessage
    payload: int

    def to_dict(self) -> dict:
        return {
            'phase': self.phase,
            'residual': self.residual,
            'group': list(self.message.group),
            'sender': self.message.sender,
            'components': [list(c) for c in self.message.components],
            'payload': self.payload,
        }


@dataclass(frozen=True, eq=False)
class Transcript:
    """Payloads of a plan, one array per phase in transmission order."""

    plan: ShufflePlan
    payloads: Tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return sum(len(p) for p in self.payloads)

    def __iter__(self) -> Iterator[TranscriptEntry]:
        for phase, payloads in zip(self.plan.phases, self.payloads):
            for i, payload in enumerate(payloads.tolist()):
                yield TranscriptEntry(phase.gain, phase.residual, phase.message(i), payload)

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate(self.payloads) if self.payloads else np.zeros(0, dtype=np.int64)


@dataclass(frozen=True)
class RunReport:
    """Outcome of one simulated run."""

    params: SystemParams
    rates: RatePair
    seed: int
    non_stragglers: Tuple[int, ...]
    message_count: int
    phase_counts: Dict[int, int]
    counted_load: Fraction
    analytic_load: Fraction
    verified: bool
    transcript_digest: str
    empirical_latency: Optional[float] = None
    plan: Optional[ShufflePlan] = field(default=None, repr=False, compare=False)
    transcript: Optional[Transcript] = field(default=None, repr=False, compare=False)

    @property
    def loads_agree(self) -> bool:
        return self.counted_load == self.analytic_load

    def to_dict(self) -> dict:
        return {
            'params': self.params.to_dict(),
            'rates': self.rates.to_dict(),
            'seed': self.seed,
            'Q': list(self.non_stragglers),
            'message_count': self.message_count,
            'phase_counts': {str(gain): count for gain, count in self.phase_counts.items()},
            'counted_load': fraction_fields(self.counted_load),
            'analytic_load': fraction_fields(self.analytic_load),
            'verified': self.verified,
            'empirical_latency': self.empirical_latency,
            'transcript_sha256': self.transcript_digest,
        }


# ============================================================================
# PHASES
# ============================================================================

def map_phase(pm: PlacementMap, coded: galois.FieldArray, x: galois.FieldArray) -> Dict[int, IVStore]:
    """
    Compute every server's IVs: products of its stored coded rows with all columns of X.

    Returns:
        {server: IVStore} for all K servers
    """
    if coded.shape[0] != pm.coded_rows:
        raise DimensionError(f"coded matrix has {coded.shape[0]} rows, placement expects {pm.coded_rows}")
    if coded.shape[1] != x.shape[0]:
        raise DimensionError(f"C is {coded.shape} but X is {x.shape}")

    # every coded row is stored somewhere, so C X is computed once
    products = np.asarray(coded @ x, dtype=np.int64)
    stores = {}
    for k in range(1, pm.params.K + 1):
        rows = np.flatnonzero(pm.holders[k - 1])
        stores[k] = IVStore(k, pm.coded_rows, x.shape[1], rows, products[rows])
    logger.debug(f"Map phase: {pm.rows_per_server} rows x {x.shape[1]} columns per server")
    return stores


def execute_plan(plan: ShufflePlan, stores: Mapping[int, IVStore]) -> Transcript:
    """
    Transmit every phase in plan order; each addressed receiver decodes its IVs.

    Returns:
        The ordered payload transcript
    """
    payloads = []
    for phase in plan.phases:
        sent = transmit(phase, stores)
        deliver(phase, sent, stores)
        payloads.append(sent)
    return Transcript(plan, tuple(payloads))


def replay_transcript(transcript: Transcript, stores: Mapping[int, IVStore]) -> Mapping[int, IVStore]:
    """Re-decode a recorded transcript against stores holding only map-phase IVs."""
    for phase, payloads in zip(transcript.plan.phases, transcript.payloads):
        deliver(phase, payloads, stores)
    return stores


def transcript_digest(transcript: Transcript, w: int) -> str:
    """SHA-256 over the payloads as w-bit little-endian integers."""
    payloads = transcript.flat.astype(FIELD_DTYPES[w])
    return hashlib.sha256(payloads.tobytes()).hexdigest()


def decode_systems(stores: Mapping[int, IVStore], ra: ReduceAssignment, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gather one decoding system per column of Y from the server reducing it.

    Each system uses the m smallest coded rows the reducer knows for its column.

    Returns:
        (row_ids, values), both (N, m) and indexed by column
    """
    n_columns = sum(len(ra[k]) for k in ra.servers)
    row_ids = np.zeros((n_columns, m), dtype=np.int64)
    values = np.zeros((n_columns, m), dtype=np.int64)
    for k in ra.servers:
        cols = np.asarray(ra[k], dtype=np.int64)
        known = stores[k].known[:, cols]
        counts = known.sum(axis=0)
        if (counts < m).any():
            short = cols[counts < m].tolist()
            raise InsufficientRowsError(f"server {k} holds {counts.min()} coded rows for columns {short}, needs {m}")
        # known rows sort first, each in ascending row order
        chosen = np.argsort(~known, axis=0, kind='stable')[:m]
        row_ids[cols] = chosen.T
        values[cols] = stores[k].values[chosen, cols].T
    return row_ids, values


def reduce_phase(generator: GeneratorMatrix, stores: Mapping[int, IVStore],
                 ra: ReduceAssignment) -> galois.FieldArray:
    """Decode each non-straggler's columns of Y from its coded IVs; returns the m x N output."""
    row_ids, values = decode_systems(stores, ra, generator.message_length)
    return decode_batch(generator, row_ids, values).T


# ============================================================================
# RUNS
# ============================================================================

def _preflight(p: SystemParams, r: RatePair) -> None:
    verdict = check_feasible(p, r)
    if not verdict.ok:
        raise InfeasibleRatesError(verdict.violations)
    split = divisibility_check(p, r)
    if not split.ok:
        raise DivisibilityError(split)


def _non_straggler_set(p: SystemParams, servers: Sequence[int]) -> Tuple[int, ...]:
    chosen = tuple(sorted(int(k) for k in servers))
    if len(chosen) != p.q or len(set(chosen)) != p.q or not all(1 <= k <= p.K for k in chosen):
        raise InvalidParamsError(f"non-stragglers {list(chosen)} are not {p.q} distinct servers of [1, {p.K}]")
    return chosen


class Simulation:
    """
    Map phase of one seeded instance, reusable across non-straggler sets.

    The map-phase products do not depend on who straggles, so they are
    computed once and every run starts from fresh copies of the stores.
    """

    def __init__(self, params: SystemParams, rates: RatePair, seed: int):
        _preflight(params, rates)
        self.params = params
        self.rates = rates
        self.seed = seed
        self.data = ProblemData(params, rates, seed)
        self.analytic_load = load_breakdown(params, rates).total
        # CodeConstructionError surfaces as is: the field is too small for r1 m points
        self.data.generator
        try:
            self.placement = partition_rows(params, rates)
            self._stores = map_phase(self.placement, self.data.coded, self.data.x)
        except CodedShuffleError as e:
            raise PipelineError('map', e) from e

    def stores(self) -> Dict[int, IVStore]:
        return {k: store.fresh() for k, store in self._stores.items()}

    def run_many(self, non_straggler_sets: Sequence[Sequence[int]],
                 latencies: Optional[Sequence[Optional[float]]] = None) -> List[RunReport]:
        """
        Shuffle for every non-straggler set, then decode all of them in one batch.

        Raises:
            InvalidParamsError: if a set is not q distinct servers of [1, K]
            PipelineError: naming the shuffle or reduce step that failed
        """
        p, r = self.params, self.rates
        sets = [_non_straggler_set(p, servers) for servers in non_straggler_sets]
        latencies = list(latencies) if latencies is not None else [None] * len(sets)

        if not sets:
            return []

        runs, row_ids, values = [], [], []
        for servers in sets:
            stores = self.stores()
            try:
                ra = assign_reduce(p, servers)
                plan = build_plan(p, r, self.placement, servers, ra)
                transcript = execute_plan(plan, stores)
            except CodedShuffleError as e:
                raise PipelineError('shuffle', e) from e
            try:
                rows, ivs = decode_systems(stores, ra, p.m)
            except CodedShuffleError as e:
                raise PipelineError('reduce', e) from e
            runs.append((servers, plan, transcript))
            row_ids.append(rows)
            values.append(ivs)

        try:
            decoded = decode_batch(self.data.generator, np.concatenate(row_ids), np.concatenate(values))
        except CodedShuffleError as e:
            raise PipelineError('reduce', e) from e

        expected = self.data.expected_output
        reports = []
        for i, (servers, plan, transcript) in enumerate(runs):
            output = decoded[i * p.N:(i + 1) * p.N].T
            verified = bool(np.array_equal(output, expected))
            report = RunReport(
                params=p,
                rates=r,
                seed=self.seed,
                non_stragglers=servers,
                message_count=plan.message_count,
                phase_counts=plan.phase_counts(),
                counted_load=plan_load(plan, p.m),
                analytic_load=self.analytic_load,
                verified=verified,
                transcript_digest=transcript_digest(transcript, p.w),
                empirical_latency=latencies[i],
                plan=plan,
                transcript=transcript,
            )
            level = logging.INFO if verified else logging.WARNING
            logger.log(level, f"Q={list(servers)} {r}: {plan.message_count} messages, "
                              f"load {report.counted_load}, verified={verified}")
            reports.append(report)
        return reports

    def run_with(self, non_stragglers: Sequence[int], empirical_latency: Optional[float] = None) -> RunReport:
        """Shuffle and reduce for one non-straggler set."""
        return self.run_many([non_stragglers], [empirical_latency])[0]


def run(p: SystemParams, r: RatePair, model: StragglerModel, seed: int) -> RunReport:
    """
    Full pipeline: data from the seed, encoding, straggler sampling, map,
    coded shuffle, MDS reduce and verification against A X.

    Raises:
        InfeasibleRatesError: if (p, r) fails check_feasible
        DivisibilityError: if (p, r) fails divisibility_check
        CodeConstructionError: if GF(2^w) has fewer than r1 m elements
        InvalidParamsError: if a fixed non-straggler set is malformed
        PipelineError: naming the failing phase for anything else
    """
    simulation = Simulation(p, r, seed)
    servers, times = sample_stragglers(p, model)
    finish = None if times is None else float(np.sort(times)[p.q - 1])
    return simulation.run_with(servers, finish)
