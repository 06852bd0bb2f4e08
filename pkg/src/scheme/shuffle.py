"""
Coded Multicast Shuffle
=======================
Reduce assignment, construction of the phase / group / message plan, XOR
encoding at senders and side-information cancellation at receivers.

Phase i (i = s_max .. s_q) runs in every (i+1)-subset S of the
non-stragglers: each receiver r in S needs the IVs of rows stored exactly at
S minus r among the non-stragglers; each of the other i members sends a
1/i share, and a sender XORs one IV per receiver into every message. An
extra phase at gain s_q - 1 tops every receiver up with the IVs still
missing.

Plans and stores are numpy arrays so a whole phase is encoded and decoded
in a few vectorized steps; MulticastMessage objects are built on demand.
"""

import copy
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Mapping, NamedTuple, Optional, Sequence, Tuple
import logging

import numpy as np

from ..errors import DivisibilityError, InvalidParamsError, ShuffleError
from ..utils.combinatorics import colex_subsets_of
from .params import RatePair, SystemParams
from .placement import PlacementMap, divisibility_check, reconstructible
from .rates import binomial, load_breakdown

logger = logging.getLogger(__name__)

NO_ROWS = np.zeros(0, dtype=np.int64)


# ============================================================================
# REDUCE ASSIGNMENT
# ============================================================================

@dataclass(frozen=True)
class ReduceAssignment:
    """Columns of Y reduced at each non-straggler (0-based column ids)."""

    columns: Mapping[int, Tuple[int, ...]]

    def __getitem__(self, server: int) -> Tuple[int, ...]:
        return self.columns[server]

    @property
    def servers(self) -> Tuple[int, ...]:
        return tuple(sorted(self.columns))


def assign_reduce(p: SystemParams, non_stragglers: Sequence[int]) -> ReduceAssignment:
    """
    Give the a-th non-straggler (ascending id) columns [a*N/q, (a+1)*N/q).

    Raises:
        InvalidParamsError: if q does not divide N or the server set has the wrong size
    """
    servers = sorted(non_stragglers)
    if len(servers) != p.q or len(set(servers)) != p.q:
        raise InvalidParamsError(f"expected {p.q} distinct non-stragglers, got {servers}")
    if p.N % p.q:
        raise InvalidParamsError(f"q={p.q} does not divide N={p.N}")
    width = p.N // p.q
    return ReduceAssignment({
        k: tuple(range(a * width, (a + 1) * width)) for a, k in enumerate(servers)
    })


# ============================================================================
# PLAN TYPES
# ============================================================================

class IVComponent(NamedTuple):
    """One IV folded into a message, decodable only by its target."""

    row: int
    column: int
    target: int


@dataclass(frozen=True)
class MulticastMessage:
    """XOR of one IV per receiver in group minus sender."""

    sender: int
    group: Tuple[int, ...]
    components: Tuple[IVComponent, ...]

    @property
    def receivers(self) -> Tuple[int, ...]:
        return tuple(c.target for c in self.components)

    def to_dict(self) -> dict:
        return {
            'sender': self.sender,
            'group': list(self.group),
            'components': [list(c) for c in self.components],
        }


@dataclass(frozen=True)
class GroupShuffle:
    members: Tuple[int, ...]
    messages: Tuple[MulticastMessage, ...]


@dataclass(frozen=True, eq=False)
class ShufflePhase:
    """
    All messages of one multicast gain; residual marks the extra phase.

    Message i is sent by senders[i] inside the group members[group[i]] and
    XORs the IVs (rows[i, c], columns[i, c]) addressed to targets[i, c].
    Messages run group by group (colex), then by sender, then by share slot.
    """

    gain: int
    residual: bool
    members: np.ndarray
    group: np.ndarray
    senders: np.ndarray
    rows: np.ndarray
    columns: np.ndarray
    targets: np.ndarray

    @property
    def message_count(self) -> int:
        return len(self.senders)

    def message(self, i: int) -> MulticastMessage:
        components = tuple(
            IVComponent(int(row), int(column), int(target))
            for row, column, target in zip(self.rows[i], self.columns[i], self.targets[i])
        )
        members = tuple(int(k) for k in self.members[self.group[i]])
        return MulticastMessage(int(self.senders[i]), members, components)

    def messages(self) -> Iterator[MulticastMessage]:
        for i in range(self.message_count):
            yield self.message(i)

    @property
    def groups(self) -> Tuple[GroupShuffle, ...]:
        bundles = [[] for _ in range(len(self.members))]
        for i, message in enumerate(self.messages()):
            bundles[self.group[i]].append(message)
        return tuple(
            GroupShuffle(tuple(int(k) for k in members), tuple(bundle))
            for members, bundle in zip(self.members, bundles)
        )


@dataclass(frozen=True)
class ShufflePlan:
    """Ordered phases: gains s_max down to s_q, then the optional residual phase."""

    non_stragglers: Tuple[int, ...]
    phases: Tuple[ShufflePhase, ...]

    @property
    def message_count(self) -> int:
        return sum(phase.message_count for phase in self.phases)

    def phase_counts(self) -> Dict[int, int]:
        return {phase.gain: phase.message_count for phase in self.phases}

    def messages(self) -> Iterator[Tuple[ShufflePhase, MulticastMessage]]:
        for phase in self.phases:
            for message in phase.messages():
                yield phase, message

    def to_dict(self) -> dict:
        return {
            'non_stragglers': list(self.non_stragglers),
            'message_count': self.message_count,
            'phases': [
                {
                    'gain': phase.gain,
                    'residual': phase.residual,
                    'groups': [
                        {'members': list(g.members), 'messages': [msg.to_dict() for msg in g.messages]}
                        for g in phase.groups
                    ],
                }
                for phase in self.phases
            ],
        }


# ============================================================================
# PLAN CONSTRUCTION
# ============================================================================

def _holder_rows(pm: PlacementMap, non_stragglers: Sequence[int]) -> Dict[Tuple[int, ...], np.ndarray]:
    """Coded rows keyed by the non-stragglers that store them, blocks in colex order."""
    active = set(non_stragglers)
    parts: Dict[Tuple[int, ...], list] = {}
    for block in pm.blocks:
        key = tuple(sorted(active.intersection(block.subset.members)))
        parts.setdefault(key, []).append(np.arange(block.row_start, block.row_end))
    return {key: np.concatenate(ranges) for key, ranges in parts.items()}


def _group_array(groups: Sequence[Tuple[int, ...]], size: int) -> np.ndarray:
    return np.array(groups, dtype=np.int64).reshape(len(groups), size)


def _pair_shares(gain: int, residual: bool, members: np.ndarray,
                 queue_rows: np.ndarray, queue_columns: np.ndarray) -> ShufflePhase:
    """
    Split every receiver's queue into `gain` equal shares (ascending sender
    order) and let each sender XOR the j-th IV of each of its shares.

    members is (G, gain+1); queue_rows and queue_columns are (G, gain+1, E)
    with queue a of group g belonging to receiver members[g, a].
    """
    n_groups, group_size, length = queue_rows.shape
    if length % gain:
        raise ShuffleError(f"{length} IVs cannot be split among {gain} senders", phase=gain)
    size = length // gain
    slots = np.arange(size)

    senders, rows, columns, targets = [], [], [], []
    for b in range(group_size):
        receivers = np.array([a for a in range(group_size) if a != b])
        # sender b owns share b of the receivers after it, share b - 1 of those before
        picks = (np.where(receivers > b, b, b - 1) * size)[:, None] + slots
        rows.append(queue_rows[:, receivers[:, None], picks].transpose(0, 2, 1))
        columns.append(queue_columns[:, receivers[:, None], picks].transpose(0, 2, 1))
        targets.append(np.broadcast_to(members[:, None, receivers], (n_groups, size, gain)))
        senders.append(np.broadcast_to(members[:, b:b + 1], (n_groups, size)))

    return ShufflePhase(
        gain=gain,
        residual=residual,
        members=members,
        group=np.repeat(np.arange(n_groups), group_size * size),
        senders=np.stack(senders, axis=1).reshape(-1),
        rows=np.stack(rows, axis=1).reshape(-1, gain),
        columns=np.stack(columns, axis=1).reshape(-1, gain),
        targets=np.stack(targets, axis=1).reshape(-1, gain),
    )


def _regular_phase(gain: int, non_stragglers: Tuple[int, ...], holders, ra: ReduceAssignment,
                   expected: int) -> ShufflePhase:
    groups = colex_subsets_of(non_stragglers, gain + 1)
    queue_rows = np.empty((len(groups), gain + 1, expected), dtype=np.int64)
    queue_columns = np.empty_like(queue_rows)
    for g, members in enumerate(groups):
        for a, receiver in enumerate(members):
            rows = holders.get(members[:a] + members[a + 1:], NO_ROWS)
            columns = np.asarray(ra[receiver])
            if len(rows) * len(columns) != expected:
                raise ShuffleError(
                    f"receiver needs {len(rows) * len(columns)} IVs, expected {expected}",
                    phase=gain, group=members, receiver=receiver,
                )
            # (colex rank, row, column) order
            queue_rows[g, a] = np.repeat(rows, len(columns))
            queue_columns[g, a] = np.tile(columns, len(rows))
    return _pair_shares(gain, False, _group_array(groups, gain + 1), queue_rows, queue_columns)


def _residual_amounts(total: int, n_groups: int, width: int) -> np.ndarray:
    """
    Slot s of a receiver's residual IVs goes to its (s // per_group)-th group
    and to its column s % width.

    Returns:
        (n_groups, width) number of rows each column takes from each group
    """
    slots = np.arange(total).reshape(n_groups, total // n_groups) % width
    return (slots[:, :, None] == np.arange(width)).sum(axis=1)


def _residual_phase(gain: int, non_stragglers: Tuple[int, ...], holders, ra: ReduceAssignment,
                    total: int) -> ShufflePhase:
    groups = colex_subsets_of(non_stragglers, gain + 1)
    mine = binomial(len(non_stragglers) - 1, gain)
    if total % mine:
        raise ShuffleError(f"{total} residual IVs do not split over {mine} groups", phase=gain)
    amounts = _residual_amounts(total, mine, len(ra[non_stragglers[0]]))

    seen = dict.fromkeys(non_stragglers, 0)
    queue_rows = np.empty((len(groups), gain + 1, total // mine), dtype=np.int64)
    queue_columns = np.empty_like(queue_rows)
    for g, members in enumerate(groups):
        for a, receiver in enumerate(members):
            wanted = amounts[seen[receiver]]
            seen[receiver] += 1
            rows = holders.get(members[:a] + members[a + 1:], NO_ROWS)
            if wanted.max() > len(rows):
                raise ShuffleError(
                    f"a column needs {wanted.max()} residual rows, only {len(rows)} reachable",
                    phase=gain, group=members, receiver=receiver,
                )
            # column c takes the first wanted[c] rows of the cell, rows in canonical order
            picked, position = np.nonzero(np.arange(len(rows))[:, None] < wanted[None, :])
            queue_rows[g, a] = rows[picked]
            queue_columns[g, a] = np.asarray(ra[receiver])[position]
    return _pair_shares(gain, True, _group_array(groups, gain + 1), queue_rows, queue_columns)


def needed_ivs(pm: PlacementMap, plan: ShufflePlan, ra: ReduceAssignment, receiver: int) -> Dict[int, int]:
    """
    Coverage of one receiver: for each column it reduces, how many coded
    rows it still lacks for decoding once the plan is delivered.

    Returns:
        {column: missing rows}; all zero when the receiver can decode
    """
    p = pm.params
    held = int(pm.holders[receiver - 1].sum())
    delivered = np.zeros(p.N, dtype=np.int64)
    for phase in plan.phases:
        delivered += np.bincount(phase.columns[phase.targets == receiver], minlength=p.N)
    return {col: max(0, p.m - held - int(delivered[col])) for col in ra[receiver]}


def build_plan(p: SystemParams, r: RatePair, pm: PlacementMap, non_stragglers: Sequence[int],
               ra: ReduceAssignment) -> ShufflePlan:
    """
    Construct every multicast message of the shuffle, without payloads.

    Args:
        p: Problem instance
        r: Feasible rate pair
        pm: Placement built for (p, r)
        non_stragglers: The q servers that finished the map phase
        ra: Reduce assignment over the same servers

    Returns:
        ShufflePlan with phases s_max..s_q and the optional residual phase

    Raises:
        DivisibilityError: if the instance does not split evenly
        ShuffleError: if some needed IV is not reachable from the non-stragglers
    """
    split = divisibility_check(p, r)
    if not split.ok:
        raise DivisibilityError(split)
    servers = tuple(sorted(non_stragglers))
    if not reconstructible(pm, servers):
        raise ShuffleError(f"non-stragglers {list(servers)} cannot rebuild A from their rows")

    breakdown = load_breakdown(p, r)
    holders = _holder_rows(pm, servers)
    columns = Fraction(p.N, p.q)
    phases = []
    for gain in range(breakdown.s_max, breakdown.s_q - 1, -1):
        expected = binomial(p.K - p.q, r.r2 - gain) * pm.block_size * columns
        phase = _regular_phase(gain, servers, holders, ra, int(expected))
        logger.debug(f"Phase {gain}: {len(phase.members)} groups, {phase.message_count} messages")
        phases.append(phase)

    gain = breakdown.residual_gain
    if gain is not None:
        total = int(breakdown.residual_ivs(p.m))
        phase = _residual_phase(gain, servers, holders, ra, total)
        logger.debug(f"Residual phase {gain}: {total} IVs per receiver, {phase.message_count} messages")
        phases.append(phase)

    plan = ShufflePlan(servers, tuple(phases))
    for receiver in servers:
        short = sorted(col for col, missing in needed_ivs(pm, plan, ra, receiver).items() if missing)
        if short:
            raise ShuffleError(f"columns {short} stay short of {p.m} coded rows", receiver=receiver)
    logger.debug(f"Shuffle plan for Q={list(servers)}: {plan.message_count} messages {plan.phase_counts()}")
    return plan


# ============================================================================
# IV STORES AND MESSAGE CODING
# ============================================================================

class IVStore:
    """
    IVs held by one server: its map-phase products plus what it decoded.

    values[row, column] is the IV of a coded row with a column of X, valid
    where known is set; local marks the rows stored in the map phase.
    """

    def __init__(self, server: int, coded_rows: int, n_columns: int,
                 rows: Sequence[int] = (), products=None):
        self.server = server
        rows = np.asarray(rows, dtype=np.int64)
        self.local = np.zeros(coded_rows, dtype=bool)
        self.local[rows] = True
        self.values = np.zeros((coded_rows, n_columns), dtype=np.int64)
        if len(rows):
            self.values[rows] = np.asarray(products, dtype=np.int64).reshape(len(rows), n_columns)
        self.known = np.repeat(self.local[:, None], n_columns, axis=1)

    @property
    def local_rows(self) -> np.ndarray:
        return np.flatnonzero(self.local)

    def fresh(self) -> 'IVStore':
        """Same map-phase products, nothing received yet."""
        store = copy.copy(self)
        store.values = np.where(self.local[:, None], self.values, 0)
        store.known = np.repeat(self.local[:, None], self.values.shape[1], axis=1)
        return store

    def value(self, row: int, column: int) -> Optional[int]:
        return int(self.values[row, column]) if self.known[row, column] else None

    def receive(self, row: int, column: int, value: int) -> None:
        self.receive_many([row], [column], [value])

    def receive_many(self, rows, columns, values) -> None:
        rows = np.asarray(rows, dtype=np.int64)
        columns = np.asarray(columns, dtype=np.int64)
        clash = self.known[rows, columns]
        if clash.any():
            i = int(np.argmax(clash))
            raise ShuffleError(f"IV (row={rows[i]}, column={columns[i]}) delivered twice", receiver=self.server)
        flat = rows * self.values.shape[1] + columns
        if len(np.unique(flat)) != len(flat):
            raise ShuffleError("an IV is delivered twice within one phase", receiver=self.server)
        self.values[rows, columns] = values
        self.known[rows, columns] = True

    def column_rows(self, column: int) -> Dict[int, int]:
        """Every coded row known for one column, local and received."""
        rows = np.flatnonzero(self.known[:, column])
        return dict(zip(rows.tolist(), self.values[rows, column].tolist()))

    def __len__(self) -> int:
        return int(self.known.sum())


def _xor_payloads(store: IVStore, rows: np.ndarray, columns: np.ndarray, **context) -> np.ndarray:
    """XOR (field sum) of the sender's local IVs along each row of (M, g) index arrays."""
    held = store.local[rows]
    if not held.all():
        i, c = np.argwhere(~held)[0]
        raise ShuffleError(f"sender lacks row {rows[i, c]}", sender=store.server, **context)
    return np.bitwise_xor.reduce(store.values[rows, columns], axis=1)


def _cancel(store: IVStore, rows: np.ndarray, columns: np.ndarray, own: np.ndarray,
            payloads: np.ndarray, **context) -> np.ndarray:
    """Strip every component but the receiver's own (marked by own) with known IVs."""
    usable = store.known[rows, columns] | own
    if not usable.all():
        i, c = np.argwhere(~usable)[0]
        raise ShuffleError(
            f"missing side information for row {rows[i, c]}, column {columns[i, c]}",
            receiver=store.server, **context,
        )
    side = np.where(own, 0, store.values[rows, columns])
    return payloads ^ np.bitwise_xor.reduce(side, axis=1)


def _component_arrays(msg: MulticastMessage) -> Tuple[np.ndarray, np.ndarray]:
    rows = np.array([[c.row for c in msg.components]], dtype=np.int64)
    columns = np.array([[c.column for c in msg.components]], dtype=np.int64)
    return rows, columns


def encode_message(msg: MulticastMessage, store: IVStore) -> int:
    """Payload of a message: XOR (field sum) of its component IVs at the sender."""
    rows, columns = _component_arrays(msg)
    return int(_xor_payloads(store, rows, columns, group=msg.group)[0])


def decode_message(msg: MulticastMessage, payload: int, receiver: int, store: IVStore) -> Tuple[int, int, int]:
    """
    Cancel the other components with local side information.

    Returns:
        (row, column, value) of the receiver's own component
    """
    own = np.array([[c.target == receiver for c in msg.components]])
    if not own.any():
        raise ShuffleError("receiver is not addressed by this message",
                           group=msg.group, sender=msg.sender, receiver=receiver)
    rows, columns = _component_arrays(msg)
    value = _cancel(store, rows, columns, own, np.array([payload], dtype=np.int64),
                    group=msg.group, sender=msg.sender)
    component = msg.components[int(np.argmax(own[0]))]
    return component.row, component.column, int(value[0])


def transmit(phase: ShufflePhase, stores: Mapping[int, IVStore]) -> np.ndarray:
    """Payloads of every message of a phase, each encoded at its sender."""
    payloads = np.zeros(phase.message_count, dtype=np.int64)
    for sender in np.unique(phase.senders).tolist():
        chosen = phase.senders == sender
        payloads[chosen] = _xor_payloads(stores[sender], phase.rows[chosen], phase.columns[chosen],
                                         phase=phase.gain)
    return payloads


def deliver(phase: ShufflePhase, payloads: np.ndarray, stores: Mapping[int, IVStore]) -> None:
    """Every addressed receiver decodes its IV of each message and stores it."""
    for receiver in np.unique(phase.targets).tolist():
        own = phase.targets == receiver
        chosen = own.any(axis=1)
        own = own[chosen]
        rows, columns = phase.rows[chosen], phase.columns[chosen]
        values = _cancel(stores[receiver], rows, columns, own, payloads[chosen], phase=phase.gain)
        stores[receiver].receive_many(rows[own], columns[own], values)


def plan_load(plan: ShufflePlan, m: int) -> Fraction:
    """Communication load: messages (one field element each) over m."""
    return Fraction(plan.message_count, m)
