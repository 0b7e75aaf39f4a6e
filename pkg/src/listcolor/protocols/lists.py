"""Two-round list coloring from sublist systems.

Phase 0 (no communication): every node maps its type (input color,
normalized list) to a sublist system K_v with the zero-round greedy, so
adjacent nodes hold systems that do not (tau', tau)-conflict.

Round 1: nodes send (psi, list) to their in-neighbors, so every node learns
the systems of its outneighbors and keeps the first member C_v of K_v that
meets no member of those systems in tau or more colors.

Round 2: nodes send the index of C_v; every node then picks a color of C_v.
For proper coloring it takes the smallest color outside all C_u of its
outneighbors; for defective coloring (all neighbors, no orientation) it takes
the color of C_v shared with the fewest neighbors' C_u.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from ..combinatorics import DEFAULT_BUDGET, LazySubsets, SublistSystem
from ..conflict_core import (
    ConflictInstance,
    TauConflict,
    TauTauConflict,
    TypeKey,
    max_tau_overlap_count,
    present_types,
    solve_types,
)
from ..errors import BudgetExceeded, InvariantError, ParameterError, SolvabilityError
from ..graph_model import (
    ListAssignment,
    OrientedGraph,
    VertexColoring,
    normalize_lists,
    validate_coloring,
)
from ..list_framework import (
    Mode,
    ParameterSet,
    build_L2,
    collapsed,
    derive_parameters,
    l2_summary,
)
from ..simulator import (
    Accounting,
    BitContext,
    ListAnnouncement,
    NodeProgram,
    NodeView,
    SublistIndex,
    run,
)
from .common import RunResult, accountant_for


@dataclass(frozen=True)
class P2Solution:
    """Zero-round assignment of sublist systems.

    Attributes:
        family: Distinct normalized lists, sorted; the restricted family F.
        list_of: Index into ``family`` for each vertex.
        table: System chosen for every processed type.
        list_size: |L2(S)|, the same for every S.
        d_bound: Conflict-degree bound used in the solvability check.
    """

    family: tuple[tuple[int, ...], ...]
    list_of: tuple[int, ...]
    table: dict[TypeKey, SublistSystem]
    list_size: int
    d_bound: int

    def system_of(self, psi: int, colors: tuple[int, ...]) -> SublistSystem:
        return self.table[TypeKey(psi, self.family.index(colors))]

    def per_vertex(self, psi: Sequence[int]) -> tuple[SublistSystem, ...]:
        return tuple(self.table[TypeKey(psi[v], i)] for v, i in enumerate(self.list_of))


def solve_p2(
    graph: OrientedGraph,
    lists: ListAssignment,
    params: ParameterSet,
    *,
    restrict_types: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> P2Solution:
    """Assign each type a member of L2 of its list without communication.

    The family is the set of lists that actually occur.  With
    ``restrict_types`` the greedy also only processes occurring types.

    Raises:
        SolvabilityError: if |L2| <= (number of types) * d.
        BudgetExceeded: if the level-2 lists are too large to build.
    """
    family = tuple(sorted(set(lists.lists)))
    index = {lst: i for i, lst in enumerate(family)}
    list_of = tuple(index[lst] for lst in lists.lists)
    summary = l2_summary(params, budget)
    if summary.size == 0:
        raise SolvabilityError("L2 is empty for these parameters")
    if collapsed(params):
        members = tuple(LazySubsets(lst, params.k) for lst in family)
        inst = ConflictInstance(TauConflict(params.tau), members, list_of, graph.m,
                                params.colorspace_size)
        types = present_types(inst, graph.psi) if restrict_types else None
        raw = solve_types(inst, summary.d_hat, types, budget)
        table = {key: (c,) for key, c in raw.items()}
    else:
        level2 = tuple(tuple(build_L2(lst, params, budget)) for lst in family)
        inst = ConflictInstance(TauTauConflict(params.tau_prime, params.tau), level2, list_of, graph.m,
                                params.colorspace_size)
        types = present_types(inst, graph.psi) if restrict_types else None
        table = solve_types(inst, summary.d_hat, types, budget)
    return P2Solution(family, list_of, table, summary.size, summary.d_hat)


@dataclass(frozen=True)
class _ListState:
    system: SublistSystem
    member: int | None = None
    color: int | None = None
    # systems of the nodes heard from in round 1, keyed by sender
    known: tuple[tuple[int, SublistSystem], ...] = ()


class TwoRoundListProgram(NodeProgram):
    """Node program for both two-round variants (see module docstring)."""

    def __init__(self, solution: P2Solution, lists: ListAssignment, tau: int,
                 defective: bool) -> None:
        self.solution = solution
        self.lists = lists
        self.tau = tau
        self.defective = defective

    def _targets(self, view: NodeView) -> tuple[int, ...]:
        return view.neighbors if self.defective else view.inneighbors

    def init(self, view: NodeView) -> _ListState:
        return _ListState(self.solution.system_of(view.psi, self.lists[view.vertex]))

    def send(self, rnd, view, state):
        if rnd == 1:
            payload = ListAnnouncement(view.psi, self.lists[view.vertex])
        else:
            payload = SublistIndex(state.member)
        return {u: payload for u in self._targets(view)}

    def receive(self, rnd, view, state, inbox):
        if rnd == 1:
            known = tuple(
                (m.sender, self.solution.system_of(m.payload.psi, m.payload.colors)) for m in inbox
            )
            blocked = [set(c) for _, k in known for c in k]
            for i, c in enumerate(state.system):
                cs = set(c)
                if all(len(cs & b) < self.tau for b in blocked):
                    return _ListState(state.system, i, None, known)
            raise InvariantError(f"vertex {view.vertex}: every member of its system is blocked")
        systems = dict(state.known)
        chosen = set(state.system[state.member])
        neighbor_sets = [set(systems[m.sender][m.payload.index]) for m in inbox]
        if self.defective:
            color = min(sorted(chosen), key=lambda c: sum(c in s for s in neighbor_sets))
        else:
            free = sorted(chosen - set().union(*neighbor_sets))
            if not free:
                raise InvariantError(f"vertex {view.vertex}: no free color in its sublist")
            color = free[0]
        return _ListState(state.system, state.member, color, state.known)

    def halted(self, state: _ListState) -> bool:
        return state.color is not None


def _run_two_round(graph: OrientedGraph, lists: ListAssignment, params: ParameterSet,
                   solution: P2Solution, defective: bool, accounting, order_seed,
                   label: str) -> tuple[VertexColoring, object]:
    context = BitContext(l0=params.l0, colorspace_size=params.colorspace_size, m=graph.m,
                         beta=params.beta)
    program = TwoRoundListProgram(solution, lists, params.tau, defective)
    states, trace = run(graph, program, 2, accountant=accountant_for(accounting, context),
                        order_seed=order_seed, label=label)
    return VertexColoring(tuple(s.color for s in states)), trace


def check_residual_arithmetic(params: ParameterSet, beta: int, proper: bool) -> None:
    """k' - beta(tau' - 1) >= 1 and, for proper coloring, k - beta(tau - 1) >= 1."""
    if params.k_prime - beta * (params.tau_prime - 1) < 1:
        raise ParameterError(
            f"k' - beta(tau'-1) = {params.k_prime - beta * (params.tau_prime - 1)} < 1: "
            "a node could lose every member of its system"
        )
    if proper and params.k - beta * (params.tau - 1) < 1:
        raise ParameterError(
            f"k - beta(tau-1) = {params.k - beta * (params.tau - 1)} < 1: "
            "a node could lose every color of its sublist"
        )


def linial_for_lists(
    graph: OrientedGraph,
    lists: ListAssignment,
    params: ParameterSet,
    *,
    accounting: Accounting | str = Accounting.FORMULA,
    order_seed: int | None = None,
    restrict_types: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> RunResult:
    """Proper list coloring in two rounds on a graph of outdegree <= beta."""
    beta = graph.max_outdegree
    if beta > params.beta:
        raise ParameterError(f"graph has outdegree {beta} but the parameters assume beta = {params.beta}")
    check_residual_arithmetic(params, params.beta, proper=True)
    norm = normalize_lists(lists, params.l0)
    solution = solve_p2(graph, norm, params, restrict_types=restrict_types, budget=budget)
    coloring, trace = _run_two_round(graph, norm, params, solution, False, accounting,
                                     order_seed, "linial-for-lists")
    report = validate_coloring(graph, lists, coloring)
    return RunResult(coloring, trace, report, params.colorspace_size, params,
                     info={"familySize": len(solution.family), "l2": solution.list_size,
                           "dBound": solution.d_bound,
                           "types": len(solution.table)})


def lists_desk_parameters(
    beta: int,
    m: int,
    colorspace_size: int,
    types: int,
    *,
    l0_max: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ParameterSet:
    """Smallest desk parameters of the form tau = k = 1, tau' = 2, k' = beta + 1.

    l0 grows from ceil(2e) until |L2| > types * d (``types`` is m|F| or the
    number of occurring types).

    Raises:
        SolvabilityError: if no l0 up to ``l0_max`` works.
    """
    beta = max(1, beta)
    hi = min(colorspace_size, l0_max if l0_max is not None else colorspace_size)
    for l0 in range(math.ceil(2 * math.e), hi + 1):
        params = derive_parameters(beta, max(2, m), colorspace_size, Mode.DESK,
                                   {"tau": 1, "tau_prime": 2, "k": 1, "k_prime": beta + 1, "l0": l0})
        try:
            summary = l2_summary(params, budget)
        except BudgetExceeded:
            break
        if summary.size > types * summary.d_hat:
            return params
    raise SolvabilityError(
        f"no desk parameters with l0 <= {hi} solve {types} types at beta = {beta}; "
        "use longer lists or fewer distinct lists"
    )


def defective_desk_parameters(
    delta: int,
    d: int,
    m: int,
    colorspace_size: int,
    types: int,
    *,
    l0_max: int | None = None,
    tau_max: int = 12,
) -> ParameterSet:
    """Desk parameters for defective list coloring with single-member systems.

    k = ceil(delta/(d+1)) * tau and k' = tau' = 1; tau grows from 1 and, for
    each tau, l0 from ceil(2e k^2 / tau) up to four times that, until
    C(l0, k) exceeds ``types`` times the number of k-subsets meeting a fixed
    one in tau colors.
    """
    a = max(1, math.ceil(delta / (d + 1)))
    beta = max(1, delta)
    hi = min(colorspace_size, l0_max if l0_max is not None else colorspace_size)
    for tau in range(1, tau_max + 1):
        k = a * tau
        lo = math.ceil(2 * math.e * a * a * tau)
        for l0 in range(lo, min(hi, 4 * lo) + 1):
            if math.comb(l0, k) > types * max_tau_overlap_count(l0, k, tau):
                return derive_parameters(beta, max(2, m), colorspace_size, Mode.DESK,
                                         {"tau": tau, "tau_prime": 1, "k": k, "k_prime": 1, "l0": l0})
    raise SolvabilityError(
        f"no desk parameters with l0 <= {hi} for delta = {delta}, d = {d}, {types} types"
    )
