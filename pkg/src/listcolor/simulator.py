"""Synchronous round engine for LOCAL-model node programs.

Each round has two phases.  In the send phase every active node maps its
state to messages addressed to neighbors; in the receive phase every active
node folds its inbox (sorted by sender) into a new state.  Both phases only
read state from the end of the previous round, so the order in which nodes
are evaluated cannot change the result; ``order_seed`` shuffles that order
to make this checkable.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import random
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, field, is_dataclass
from enum import Enum
from typing import Any

from .errors import SimulationError
from .graph_model import OrientedGraph, ceil_log2


class Accounting(str, Enum):
    FORMULA = "formula"
    LITERAL = "literal"


@dataclass(frozen=True)
class ListAnnouncement:
    """Input color plus color list, sent in the first round of list coloring."""

    psi: int
    colors: tuple[int, ...]


@dataclass(frozen=True)
class SublistIndex:
    """Index of the chosen member of a sublist system."""

    index: int


@dataclass(frozen=True)
class ColorAnnouncement:
    color: int


@dataclass(frozen=True)
class InputColor:
    psi: int


@dataclass(frozen=True)
class BitContext:
    """Sizes the closed-form message lengths depend on."""

    l0: int = 0
    colorspace_size: int = 1
    m: int = 1
    beta: int = 1


def _canonical(payload: Any) -> Any:
    if is_dataclass(payload):
        return {"type": type(payload).__name__, **{k: _canonical(v) for k, v in asdict(payload).items()}}
    if isinstance(payload, (list, tuple)):
        return [_canonical(x) for x in payload]
    return payload


def account_bits(payload: Any, mode: Accounting | str, context: BitContext) -> int:
    """Bits charged for one message.

    Literal mode charges 8 bits per byte of the compact JSON encoding (an
    empty payload costs nothing).  Formula mode uses closed forms:

    * list announcement: l0 * ceil(log2 |C|) + ceil(log2 m)
    * sublist index: ceil(l0 / (4 e beta^2))
    * color announcement: ceil(log2 |C|)
    * input color: ceil(log2 m)
    """
    mode = Accounting(mode)
    if mode is Accounting.LITERAL:
        if payload is None or payload == () or payload == [] or payload == "":
            return 0
        text = json.dumps(_canonical(payload), separators=(",", ":"), sort_keys=True)
        return 8 * len(text.encode())
    if isinstance(payload, ListAnnouncement):
        return context.l0 * ceil_log2(context.colorspace_size) + ceil_log2(context.m)
    if isinstance(payload, SublistIndex):
        return math.ceil(context.l0 / (4 * math.e * context.beta**2))
    if isinstance(payload, ColorAnnouncement):
        return ceil_log2(context.colorspace_size)
    if isinstance(payload, InputColor):
        return ceil_log2(context.m)
    raise SimulationError(f"no closed-form bit count for payload type {type(payload).__name__}")


@dataclass(frozen=True)
class NodeView:
    """What a node knows about itself before round 1."""

    vertex: int
    psi: int
    neighbors: tuple[int, ...]
    outneighbors: tuple[int, ...]
    inneighbors: tuple[int, ...]


@dataclass(frozen=True)
class Message:
    sender: int
    receiver: int
    payload: Any
    bits: int


class NodeProgram:
    """Base class for node programs.  Subclasses must be deterministic."""

    def init(self, view: NodeView) -> Any:
        raise NotImplementedError

    def send(self, rnd: int, view: NodeView, state: Any) -> Mapping[int, Any]:
        return {}

    def receive(self, rnd: int, view: NodeView, state: Any, inbox: tuple[Message, ...]) -> Any:
        return state

    def halted(self, state: Any) -> bool:
        raise NotImplementedError


def state_digest(state: Any) -> str:
    return hashlib.sha256(repr(state).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RoundRecord:
    index: int
    label: str
    messages: tuple[tuple[int, int, int], ...]
    digests: tuple[str, ...]
    halted: tuple[int, ...]

    @property
    def total_messages(self) -> int:
        return len(self.messages)

    @property
    def max_bits_per_node(self) -> int:
        """Largest single message sent by any node in this round."""
        return max((b for _, _, b in self.messages), default=0)

    @property
    def total_bits(self) -> int:
        return sum(b for _, _, b in self.messages)

    def to_dict(self) -> dict:
        return {
            "round": self.index,
            "label": self.label,
            "messages": [list(x) for x in self.messages],
            "digests": list(self.digests),
            "halted": list(self.halted),
        }


@dataclass
class RoundTrace:
    """Per-round message log, state digests and halting status."""

    rounds: list[RoundRecord] = field(default_factory=list)
    completed: bool = True
    vertex_ids: tuple[int, ...] | None = None

    @property
    def n_rounds(self) -> int:
        return len(self.rounds)

    @property
    def max_bits(self) -> int:
        return max((r.max_bits_per_node for r in self.rounds), default=0)

    def extend(self, other: RoundTrace, label: str | None = None,
               vertex_ids: tuple[int, ...] | None = None) -> None:
        """Append ``other`` with renumbered rounds, mapping local IDs via ``vertex_ids``."""
        ids = vertex_ids or other.vertex_ids
        for r in other.rounds:
            msgs = r.messages
            halted = r.halted
            if ids is not None:
                msgs = tuple(sorted((ids[s], ids[t], b) for s, t, b in msgs))
                halted = tuple(ids[v] for v in halted)
            self.rounds.append(RoundRecord(len(self.rounds) + 1, label or r.label, msgs, r.digests, halted))
        self.completed = self.completed and other.completed

    def pad(self, count: int, label: str) -> None:
        for _ in range(count):
            self.rounds.append(RoundRecord(len(self.rounds) + 1, label, (), (), ()))

    def to_dict(self) -> dict:
        return {
            "rounds": self.n_rounds,
            "completed": self.completed,
            "maxBitsPerNode": self.max_bits,
            "log": [r.to_dict() for r in self.rounds],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["round", "totalMessages", "maxBitsPerNode"])
        for r in self.rounds:
            writer.writerow([r.index, r.total_messages, r.max_bits_per_node])
        return buf.getvalue()


def make_views(graph: OrientedGraph) -> list[NodeView]:
    return [
        NodeView(v, graph.psi[v], graph.neighbors(v), graph.outneighbors(v), graph.inneighbors(v))
        for v in range(graph.n)
    ]


def run(
    graph: OrientedGraph,
    program: NodeProgram,
    max_rounds: int,
    *,
    accountant: Callable[[Any], int] | None = None,
    order_seed: int | None = None,
    label: str = "",
) -> tuple[list[Any], RoundTrace]:
    """Execute ``program`` on every vertex until all halt or ``max_rounds`` pass.

    Returns the final states and the trace.  If nodes are still running after
    ``max_rounds`` the trace is returned with ``completed = False``.

    Raises:
        SimulationError: if a node addresses a non-neighbor.
    """
    views = make_views(graph)
    states = [program.init(view) for view in views]
    trace = RoundTrace()
    rng = random.Random(order_seed) if order_seed is not None else None
    order = list(range(graph.n))
    charge = accountant or (lambda payload: 0)
    rnd = 0
    while not all(program.halted(s) for s in states):
        if rnd >= max_rounds:
            trace.completed = False
            break
        rnd += 1
        if rng is not None:
            rng.shuffle(order)
        active = [v for v in order if not program.halted(states[v])]
        inboxes: dict[int, list[Message]] = {v: [] for v in range(graph.n)}
        sent: list[tuple[int, int, int]] = []
        for v in active:
            out = program.send(rnd, views[v], states[v])
            nbrs = set(views[v].neighbors)
            for receiver, payload in out.items():
                if receiver not in nbrs:
                    raise SimulationError(f"vertex {v} sent to non-neighbor {receiver} in round {rnd}")
                bits = charge(payload)
                inboxes[receiver].append(Message(v, receiver, payload, bits))
                sent.append((v, receiver, bits))
        new_states = list(states)
        for v in active:
            inbox = tuple(sorted(inboxes[v], key=lambda msg: msg.sender))
            new_states[v] = program.receive(rnd, views[v], states[v], inbox)
        states = new_states
        trace.rounds.append(RoundRecord(
            rnd,
            label,
            tuple(sorted(sent)),
            tuple(state_digest(s) for s in states),
            tuple(v for v in range(graph.n) if program.halted(states[v])),
        ))
    return states, trace
