"""(deg+1)-list coloring by repeated halving of the uncolored degree.

1. Reduce the input coloring with iterated cover-free reductions.
2. Phases j = 1..t with t = floor(log2(delta / delta^(1/4))).  With
   delta_{j-1} the maximum degree among uncolored vertices, split them into
   parts of outdegree <= beta_j.  Each part is one 3-round stage: nodes whose
   residual list (own list minus colors of colored neighbors) has at least
   delta_{j-1}/2 colors run two-round list coloring on their part, then
   announce their colors.  A node left uncolored had fewer than
   delta_{j-1}/2 residual colors, hence fewer uncolored neighbors, so the
   uncolored degree at least halves.
3. The remaining vertices are colored one input color class per round.

beta_j = sqrt(delta_{j-1} / (2X)) with X = 4e(4 log2 delta + loglog|C| +
loglog m + 8).  At small delta this is below 1; an override X' then gives
beta_j = max(1, floor(sqrt(delta_{j-1} / (2X')))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..combinatorics import DEFAULT_BUDGET, cover_free_shape, greedy_cover_free
from ..errors import GraphFormatError, InvariantError, ParameterError
from ..graph_model import (
    ColorSpace,
    ListAssignment,
    OrientedGraph,
    VertexColoring,
    validate_coloring,
)
from ..list_framework import Mode, derive_parameters, loglog
from ..simulator import (
    Accounting,
    BitContext,
    ColorAnnouncement,
    NodeProgram,
    NodeView,
    RoundTrace,
    run,
)
from .common import RunResult, accountant_for
from .linial import iterated_linial, linial_reduce
from .lists import linial_for_lists, lists_desk_parameters
from .partition import low_outdegree_partition

# smallest l0 any desk parameter set admits: l0 >= 2e k^2 / tau >= 2e
MIN_DESK_L0 = math.ceil(2 * math.e)


@dataclass(frozen=True)
class _Announce:
    heard: tuple[tuple[int, int], ...] = ()
    done: bool = False


class ColorBroadcast(NodeProgram):
    """One round in which the given vertices send their new color to all neighbors."""

    def __init__(self, colors: dict[int, int]) -> None:
        self.colors = colors

    def init(self, view: NodeView) -> _Announce:
        return _Announce()

    def send(self, rnd, view, state):
        if view.vertex in self.colors:
            return {u: ColorAnnouncement(self.colors[view.vertex]) for u in view.neighbors}
        return {}

    def receive(self, rnd, view, state, inbox):
        return _Announce(tuple((m.sender, m.payload.color) for m in inbox), True)

    def halted(self, state: _Announce) -> bool:
        return state.done


@dataclass(frozen=True)
class _Turn:
    residual: tuple[int, ...]
    color: int | None = None


class ScheduledSelection(NodeProgram):
    """Vertices with schedule color r-1 pick in round r; earlier picks are announced."""

    def __init__(self, schedule: tuple[int, ...], residual: tuple[tuple[int, ...], ...]) -> None:
        self.schedule = schedule
        self.residual = residual

    def init(self, view: NodeView) -> _Turn:
        return _Turn(self.residual[view.vertex])

    def _pick(self, view: NodeView, state: _Turn) -> int:
        if not state.residual:
            raise InvariantError(f"vertex {view.vertex} has no color left")
        return state.residual[0]

    def send(self, rnd, view, state):
        if self.schedule[view.vertex] == rnd - 1:
            c = self._pick(view, state)
            return {u: ColorAnnouncement(c) for u in view.neighbors}
        return {}

    def receive(self, rnd, view, state, inbox):
        taken = {m.payload.color for m in inbox}
        residual = tuple(c for c in state.residual if c not in taken)
        if self.schedule[view.vertex] == rnd - 1:
            return _Turn(residual, self._pick(view, state))
        return _Turn(residual)

    def halted(self, state: _Turn) -> bool:
        return state.color is not None


def _max_degree_within(graph: OrientedGraph, vertices: set[int]) -> int:
    return max((sum(1 for u in graph.adjacency[v] if u in vertices) for v in vertices), default=0)


def phase_count(delta: int) -> int:
    """floor(log2(delta / delta^(1/4))) = floor(0.75 log2 delta)."""
    return 0 if delta < 2 else math.floor(0.75 * math.log2(delta) + 1e-12)


def deg_plus_one_list_color(
    graph: OrientedGraph,
    lists: ListAssignment,
    colorspace: ColorSpace,
    *,
    mode: Mode | str = Mode.DESK,
    x_override: float | None = None,
    overrides: dict[str, int] | None = None,
    accounting: Accounting | str = Accounting.FORMULA,
    order_seed: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> RunResult:
    """Color every vertex from its list, given |L_v| >= deg(v) + 1.

    Args:
        overrides: Fixed desk parameters (tau, tau_prime, k, k_prime, l0) for
            every list-coloring stage; by default each stage picks the
            smallest parameters of the form tau = k = 1, tau' = 2,
            k' = beta_j + 1 that solve it.

    Raises:
        GraphFormatError: if some list is shorter than deg + 1.
        ParameterError: if beta_j < 1 and no X override is given.
    """
    mode = Mode(mode)
    g = graph.with_orientation(None)
    lists.check_colorspace(colorspace)
    for v in range(g.n):
        if len(lists[v]) < g.degree(v) + 1:
            raise GraphFormatError(f"list of vertex {v} has {len(lists[v])} colors but degree {g.degree(v)}")
    delta = g.max_degree
    trace = RoundTrace()
    info: dict = {"delta": delta, "phases": [], "chargedPartitionRounds": 0}

    red = iterated_linial(g, accounting=accounting, order_seed=order_seed)
    trace.extend(red.trace, "iterated-linial")
    psi = tuple(red.info["psi"])
    m = red.palette_size
    h = g.with_psi(psi, m)
    info["reducedPalette"] = m

    colors: list[int | None] = [None] * g.n

    def residual(v: int) -> tuple[int, ...]:
        taken = {colors[u] for u in g.adjacency[v] if colors[u] is not None}
        return tuple(c for c in lists[v] if c not in taken)

    def assign(v: int, c: int) -> None:
        if colors[v] is not None:
            raise InvariantError(f"vertex {v} would be recolored")
        colors[v] = c

    t = phase_count(delta)
    slack = min((len(lists[v]) - g.degree(v) for v in range(g.n)), default=0)
    if t and slack < MIN_DESK_L0 and mode is Mode.DESK:
        # residual lists could drop below any admissible l0; go straight to
        # the final phase
        info["fallback"] = f"lists exceed deg+1 by only {slack - 1}; phases skipped"
        t = 0
    info["t"] = t
    big_x = 4 * math.e * (4 * math.log2(max(delta, 2)) + loglog(colorspace.size) + loglog(m) + 8)
    info["X"] = x_override if x_override is not None else big_x

    for j in range(1, t + 1):
        uncolored = {v for v in range(g.n) if colors[v] is None}
        d_prev = _max_degree_within(g, uncolored)
        if d_prev == 0:
            break
        if x_override is not None:
            beta = max(1, math.floor(math.sqrt(d_prev / (2 * x_override))))
        else:
            real = math.sqrt(d_prev / (2 * big_x))
            if real < 1:
                raise ParameterError(
                    f"phase {j}: beta = sqrt({d_prev} / (2 * {big_x:.1f})) = {real:.3f} < 1; "
                    "the formula for X exceeds this degree, supply an X override"
                )
            beta = math.floor(real)
        sub, ids = g.induced(sorted(uncolored))
        part = low_outdegree_partition(sub, beta, d_prev)
        info["chargedPartitionRounds"] += part.charged_rounds
        phase = {"phase": j, "deltaBefore": d_prev, "beta": beta, "parts": part.k, "stages": []}
        for i, (pg, local) in enumerate(zip(part.parts, part.members)):
            label = f"phase{j}/stage{i + 1}"
            glob = [ids[x] for x in local]
            res = {v: residual(v) for v in glob}
            wpos = [p for p, v in enumerate(glob) if 2 * len(res[v]) >= d_prev]
            if not wpos:
                trace.pad(3, label)
                phase["stages"].append({"w": 0})
                continue
            wg, wlocal = pg.induced(wpos)
            wglob = [glob[p] for p in wlocal]
            wg = wg.with_psi([psi[v] for v in wglob], m)
            wlists = ListAssignment(tuple(res[v] for v in wglob))
            shortest = min(len(x) for x in wlists.lists)
            if overrides is not None:
                params = derive_parameters(beta, m, colorspace.size, Mode.DESK, overrides)
            elif mode is Mode.PAPER:
                params = derive_parameters(beta, m, colorspace.size, Mode.PAPER)
            else:
                params = lists_desk_parameters(beta, m, colorspace.size, len(wglob), l0_max=shortest)
            out = linial_for_lists(wg, wlists, params, accounting=accounting, order_seed=order_seed,
                                   restrict_types=True, budget=budget)
            if not out.report.ok or not out.report.complete:
                raise InvariantError(f"{label}: list coloring of the stage failed: {out.report}")
            trace.extend(out.trace, label + "/lists", tuple(wglob))
            new = {}
            for local_v, v in enumerate(wglob):
                assign(v, out.coloring[local_v])
                new[v] = out.coloring[local_v]
            _, ann = run(g, ColorBroadcast(new), 1, order_seed=order_seed,
                         accountant=accountant_for(accounting, BitContext(colorspace_size=colorspace.size)),
                         label=label + "/announce")
            trace.extend(ann, label + "/announce")
            phase["stages"].append({"w": len(wglob), "l0": params.l0, "kPrime": params.k_prime})
        left = {v for v in range(g.n) if colors[v] is None}
        d_after = _max_degree_within(g, left)
        phase["deltaAfter"] = d_after
        info["phases"].append(phase)
        if 2 * d_after > d_prev or d_after * 2**j > delta:
            raise InvariantError(
                f"phase {j}: uncolored degree {d_after} did not halve (before {d_prev}, delta {delta})"
            )

    left = sorted(v for v in range(g.n) if colors[v] is None)
    if left:
        sub, ids = h.induced(left)
        schedule = sub.psi
        sched_m = m
        if sub.max_degree > 0:
            z, x, l = cover_free_shape(max(3, m), max(2, sub.max_degree))
            if x * l < m:
                red2 = linial_reduce(sub, greedy_cover_free(max(3, m), max(2, sub.max_degree)),
                                     accounting=accounting, order_seed=order_seed)
                trace.extend(red2.trace, "final/reduce", ids)
                schedule = red2.coloring.colors
                sched_m = red2.palette_size
        else:
            schedule = (0,) * sub.n
            sched_m = 1
        info["finalPhase"] = {"vertices": len(left), "delta": sub.max_degree, "scheduleColors": sched_m}
        program = ScheduledSelection(tuple(schedule), tuple(residual(v) for v in ids))
        states, fin = run(sub, program, sched_m, order_seed=order_seed,
                          accountant=accountant_for(accounting, BitContext(colorspace_size=colorspace.size)),
                          label="final")
        if not fin.completed:
            raise InvariantError("final phase did not finish")
        trace.extend(fin, "final", ids)
        for local_v, v in enumerate(ids):
            assign(v, states[local_v].color)

    coloring = VertexColoring(tuple(colors))
    report = validate_coloring(g, lists, coloring)
    info["totalRounds"] = trace.n_rounds
    return RunResult(coloring, trace, report, colorspace.size, info=info)
