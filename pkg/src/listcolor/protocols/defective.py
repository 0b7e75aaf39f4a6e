"""d-defective coloring: each node may share its color with at most d neighbors.

One round without lists: every input color x owns a k-subset C_x of the
palette {0, ..., l0-1}, chosen by the zero-round greedy so that distinct
input colors' subsets meet in fewer than tau colors, with tau = ceil(log2 m)
and k = ceil(delta/(d+1)) * tau.  A node learns its neighbors' input colors
and picks the color of C_x contained in the fewest neighbors' subsets; the
neighbors' subsets cover fewer than delta * tau incidences spread over k
colors, so the minimum is at most d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ..combinatorics import DEFAULT_BUDGET, LazySubsets
from ..conflict_core import ConflictInstance, TauConflict, max_tau_overlap_count, solve_types
from ..errors import ParameterError
from ..graph_model import ListAssignment, OrientedGraph, VertexColoring, normalize_lists, validate_coloring
from ..list_framework import ParameterSet
from ..simulator import Accounting, BitContext, InputColor, NodeProgram, NodeView, run
from .common import RunResult, accountant_for
from .lists import _run_two_round, check_residual_arithmetic, solve_p2


@dataclass(frozen=True)
class DefectiveShape:
    tau: int
    k: int
    l0: int


def defective_shape(delta: int, d: int, m: int) -> DefectiveShape:
    """tau = ceil(log2 m), k = ceil(delta/(d+1)) tau, l0 = ceil(2e ceil(delta/(d+1))^2 tau)."""
    if m < 2:
        raise ParameterError(f"m must be at least 2, got {m}")
    if d < 0:
        raise ParameterError(f"defect must be nonnegative, got {d}")
    a = max(1, math.ceil(delta / (d + 1)))
    tau = math.ceil(math.log2(m))
    return DefectiveShape(tau, a * tau, math.ceil(2 * math.e * a * a * tau))


@lru_cache(maxsize=256)
def palette_subsets(m: int, tau: int, k: int, l0: int,
                    budget: int = DEFAULT_BUDGET) -> tuple[tuple[int, ...], ...]:
    """Greedy k-subsets of {0..l0-1}, one per input color, pairwise meeting in < tau colors."""
    base = LazySubsets(tuple(range(l0)), k)
    inst = ConflictInstance(TauConflict(tau), (base,), (), m, l0)
    table = solve_types(inst, max_tau_overlap_count(l0, k, tau), budget=budget)
    return tuple(table[key] for key in sorted(table))


@dataclass(frozen=True)
class _DefState:
    color: int | None = None


class LeastSharedColor(NodeProgram):
    def __init__(self, subsets: tuple[tuple[int, ...], ...]) -> None:
        self.subsets = subsets

    def init(self, view: NodeView) -> _DefState:
        return _DefState()

    def send(self, rnd, view, state):
        return {u: InputColor(view.psi) for u in view.neighbors}

    def receive(self, rnd, view, state, inbox):
        theirs = [set(self.subsets[msg.payload.psi]) for msg in inbox]
        mine = self.subsets[view.psi]
        return _DefState(min(mine, key=lambda c: sum(c in s for s in theirs)))

    def halted(self, state: _DefState) -> bool:
        return state.color is not None


def _check_defect(delta: int, d: int) -> None:
    if d >= delta:
        raise ParameterError(f"defect {d} >= delta = {delta}: any single color already works")


def defective_color(
    graph: OrientedGraph,
    d: int,
    *,
    delta: int | None = None,
    accounting: Accounting | str = Accounting.FORMULA,
    order_seed: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> RunResult:
    """One-round d-defective coloring with palette ceil(2e ceil(delta/(d+1))^2 ceil(log2 m))."""
    g = graph.with_orientation(None)
    delta = g.max_degree if delta is None else delta
    if delta < g.max_degree:
        raise ParameterError(f"delta = {delta} is below the maximum degree {g.max_degree}")
    _check_defect(delta, d)
    shape = defective_shape(delta, d, g.m)
    subsets = palette_subsets(g.m, shape.tau, shape.k, shape.l0, budget)
    acct = accountant_for(accounting, BitContext(m=g.m))
    states, trace = run(g, LeastSharedColor(subsets), 1, accountant=acct, order_seed=order_seed,
                        label="defective")
    coloring = VertexColoring(tuple(s.color for s in states), d)
    report = validate_coloring(g, None, coloring)
    return RunResult(coloring, trace, report, shape.l0,
                     info={"tau": shape.tau, "k": shape.k, "l0": shape.l0, "delta": delta})


def defective_list_color(
    graph: OrientedGraph,
    lists: ListAssignment,
    d: int,
    params: ParameterSet,
    *,
    accounting: Accounting | str = Accounting.FORMULA,
    order_seed: int | None = None,
    restrict_types: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> RunResult:
    """Two-round d-defective list coloring.

    Every neighbor is treated as an outneighbor (beta = delta), and the
    sublists must have k >= ceil(delta/(d+1)) * tau colors.
    """
    g = graph.with_orientation(None)
    delta = g.max_degree
    _check_defect(delta, d)
    if params.beta < delta:
        raise ParameterError(f"parameters assume beta = {params.beta} but the maximum degree is {delta}")
    need = max(1, math.ceil(delta / (d + 1))) * params.tau
    if params.k < need:
        raise ParameterError(f"k = {params.k} is below ceil(delta/(d+1)) * tau = {need}")
    check_residual_arithmetic(params, delta, proper=False)
    norm = normalize_lists(lists, params.l0)
    solution = solve_p2(g, norm, params, restrict_types=restrict_types, budget=budget)
    coloring, trace = _run_two_round(g, norm, params, solution, True, accounting, order_seed,
                                     "defective-list")
    coloring = VertexColoring(coloring.colors, d)
    report = validate_coloring(g, lists, coloring)
    return RunResult(coloring, trace, report, params.colorspace_size, params,
                     info={"familySize": len(solution.family), "l2": solution.list_size,
                           "dBound": solution.d_bound})
