"""One-round color reduction with cover-free families, and its iteration."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..combinatorics import CoverFreeFamily, cover_free_shape, greedy_cover_free
from ..graph_model import OrientedGraph, VertexColoring, validate_coloring
from ..simulator import Accounting, BitContext, InputColor, NodeProgram, NodeView, RoundTrace, run
from .common import RunResult, accountant_for


@dataclass(frozen=True)
class _Pick:
    color: int | None = None

    @property
    def done(self) -> bool:
        return self.color is not None


class CoverFreeReduction(NodeProgram):
    """Node with input color x takes the smallest element of S_x not in any
    set S_y of an outneighbor with input color y."""

    def __init__(self, sets: tuple[tuple[int, ...], ...]) -> None:
        self.sets = sets

    def init(self, view: NodeView) -> _Pick:
        return _Pick()

    def send(self, rnd: int, view: NodeView, state: _Pick) -> dict[int, InputColor]:
        return {u: InputColor(view.psi) for u in view.inneighbors}

    def receive(self, rnd, view, state, inbox) -> _Pick:
        taken: set[int] = set()
        for msg in inbox:
            taken.update(self.sets[msg.payload.psi])
        free = [c for c in self.sets[view.psi] if c not in taken]
        if not free:
            raise ValueError(f"vertex {view.vertex}: its set is covered by its neighbors' sets")
        return _Pick(free[0])

    def halted(self, state: _Pick) -> bool:
        return state.done


def default_family(graph: OrientedGraph, oriented: bool) -> CoverFreeFamily:
    degree = graph.max_outdegree if oriented else graph.max_degree
    return greedy_cover_free(max(3, graph.m), max(2, degree))


def linial_reduce(
    graph: OrientedGraph,
    family: CoverFreeFamily | None = None,
    *,
    oriented: bool = False,
    accounting: Accounting | str = Accounting.FORMULA,
    order_seed: int | None = None,
) -> RunResult:
    """Recolor an m-colored graph with colors from the family's universe in one round.

    With ``oriented=True`` (and an orientation present) a node only avoids
    the sets of its outneighbors, so the family needs to be cover-free only
    against the maximum outdegree.
    """
    g = graph if oriented and graph.oriented else graph.with_orientation(None)
    need = g.max_outdegree if g.oriented else g.max_degree
    if family is None:
        family = default_family(g, g.oriented)
    if family.m < g.m:
        raise ValueError(f"family has {family.m} sets but the input coloring uses m = {g.m}")
    if family.delta < need:
        raise ValueError(f"family is {family.delta}-cover-free but the graph needs {need}")
    acct = accountant_for(accounting, BitContext(m=g.m))
    states, trace = run(g, CoverFreeReduction(family.sets), 1, accountant=acct,
                        order_seed=order_seed, label="linial-reduce")
    coloring = VertexColoring(tuple(s.color for s in states))
    report = validate_coloring(graph, None, coloring)
    return RunResult(coloring, trace, report, family.universe_size,
                     info={"z": family.z, "x": family.x, "l": family.l, "delta": family.delta})


def linial_fixpoint(delta: int) -> int:
    """Largest fixpoint of m -> ceil(5.2 delta^2 log2(e m)), reached from above."""
    g = lambda m: math.ceil(5.2 * delta**2 * math.log2(math.e * m))  # noqa: E731
    m = 10**9
    while g(m) < m:
        m = g(m)
    return m


def iterated_linial(
    graph: OrientedGraph,
    *,
    accounting: Accounting | str = Accounting.FORMULA,
    order_seed: int | None = None,
    max_iterations: int = 64,
) -> RunResult:
    """Repeat :func:`linial_reduce` while the next universe is smaller than the palette.

    The resulting graph coloring is available as ``info['psi']`` with palette
    size ``palette_size``.
    """
    g = graph.with_orientation(None)
    delta = max(2, g.max_degree)
    m = g.m
    trace = RoundTrace()
    palettes = [m]
    psi = g.psi
    for _ in range(max_iterations):
        z, x, l = cover_free_shape(max(3, m), delta)
        if x * l >= m:
            break
        res = linial_reduce(g.with_psi(psi, m), greedy_cover_free(max(3, m), delta),
                            accounting=accounting, order_seed=order_seed)
        trace.extend(res.trace, "iterated-linial")
        psi = tuple(res.coloring.colors)
        m = res.palette_size
        palettes.append(m)
    coloring = VertexColoring(tuple(psi))
    report = validate_coloring(graph, None, coloring)
    return RunResult(coloring, trace, report, m,
                     info={"palettes": palettes, "iterations": len(palettes) - 1,
                           "fixpoint": linial_fixpoint(delta), "psi": list(psi)})
