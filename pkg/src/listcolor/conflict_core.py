"""Conflict instances and the zero-round greedy solver.

A conflict instance fixes a symmetric conflict relation R on some universe,
an ordered family F of lists over that universe, and for each vertex the
index of its list in F.  A solution picks one element per vertex such that
adjacent vertices pick non-conflicting elements.  When every list has size
l > m * |F| * d, where d is the conflict degree of F, the greedy below solves
the instance without any communication: types (input color, list index) are
processed in order and each takes the first element of its list that does
not conflict with an element already taken by an earlier type.
"""

from __future__ import annotations

import math
import random
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Protocol

from .combinatorics import DEFAULT_BUDGET, LazySubsets
from .errors import BudgetExceeded, InvariantError, SolvabilityError

GUARD = 1e-6


class Relation(Protocol):
    name: str

    def __call__(self, a: Any, b: Any) -> bool: ...


@dataclass(frozen=True)
class Equality:
    """Two elements conflict iff they are equal (ordinary list coloring)."""

    name: str = "Equality"

    def __call__(self, a: Any, b: Any) -> bool:
        return a == b


@dataclass(frozen=True)
class TauConflict:
    """Two color sets conflict iff they share at least tau colors."""

    tau: int
    name: str = "TauConflict"

    def __call__(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return (_mask(tuple(a)) & _mask(tuple(b))).bit_count() >= self.tau


@dataclass(frozen=True)
class TauTauConflict:
    """(tau', tau)-conflict between sublist systems."""

    tau_prime: int
    tau: int
    name: str = "TauTauConflict"

    def __call__(self, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
        ma = [_mask(tuple(x)) for x in a]
        mb = [_mask(tuple(y)) for y in b]
        tau = self.tau
        left = 0
        hit_right = [False] * len(mb)
        for x in ma:
            row = False
            for j, y in enumerate(mb):
                if (x & y).bit_count() >= tau:
                    row = True
                    hit_right[j] = True
            left += row
        return left >= self.tau_prime or sum(hit_right) >= self.tau_prime


@dataclass(frozen=True)
class PairRelation:
    """An explicit symmetric relation given by its conflicting pairs."""

    pairs: frozenset[frozenset]
    name: str = "PairRelation"

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Hashable, Hashable]]) -> PairRelation:
        return cls(frozenset(frozenset(p) for p in pairs))

    def __call__(self, a: Hashable, b: Hashable) -> bool:
        return frozenset((a, b)) in self.pairs


@lru_cache(maxsize=1 << 16)
def _mask(colors: tuple[int, ...]) -> int:
    out = 0
    for c in colors:
        out |= 1 << c
    return out


@dataclass(frozen=True, order=True)
class TypeKey:
    """(input color, list index); the natural tuple order is the processing order."""

    input_color: int
    family_index: int


@dataclass(frozen=True)
class ConflictInstance:
    """A conflict coloring instance.

    Attributes:
        relation: Symmetric conflict relation on list elements.
        family: Ordered list family F; each entry is a sequence (or a
            :class:`LazySubsets`) whose order is the canonical order.
        list_of: For each vertex, the index of its list in ``family``.
        m: Size of the input coloring.
        universe_size: Size of the element universe, if known.
    """

    relation: Any
    family: tuple[Any, ...]
    list_of: tuple[int, ...]
    m: int
    universe_size: int | None = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be positive")
        for v, i in enumerate(self.list_of):
            if not 0 <= i < len(self.family):
                raise ValueError(f"vertex {v} names list {i}, but |F| = {len(self.family)}")

    @property
    def list_size(self) -> int:
        return min((lst.size if isinstance(lst, LazySubsets) else len(lst) for lst in self.family), default=0)

    def check_symmetry(self, samples: int = 1000, seed: int = 0) -> bool:
        """Spot-check R(a, b) == R(b, a) on random element pairs."""
        pool = [e for lst in self.family if not isinstance(lst, LazySubsets) for e in lst]
        if not pool:
            return True
        rng = random.Random(seed)
        for _ in range(samples):
            a, b = rng.choice(pool), rng.choice(pool)
            if bool(self.relation(a, b)) != bool(self.relation(b, a)):
                return False
        return True


def conflict_degree(
    relation: Any, family: Sequence[Sequence[Any]], budget: int = DEFAULT_BUDGET
) -> int:
    """max over lists L, L' in F and c in L of |{c' in L' : R(c, c')}|."""
    work = sum(len(a) for a in family) * sum(len(b) for b in family)
    if work > budget:
        raise BudgetExceeded("conflict degree computation", work, budget)
    best = 0
    for a in family:
        for c in a:
            for b in family:
                cnt = sum(1 for c2 in b if relation(c, c2))
                if cnt > best:
                    best = cnt
    return best


@dataclass(frozen=True)
class LogValue:
    """A positive quantity known only through its natural logarithm."""

    ln: float


Quantity = int | LogValue


def _ln(x: Quantity) -> float:
    if isinstance(x, LogValue):
        return x.ln
    if x <= 0:
        return -math.inf
    return math.log(x)


def check_solvability(l: Quantity, m: Quantity, family_size: Quantity, d: Quantity) -> bool:
    """Decide l > m * |F| * d.

    Exact when every argument is an int.  Otherwise the comparison is made
    between logarithms and a margin of at most 1e-6 (relative to the larger
    side) counts as failure.
    """
    if all(isinstance(x, int) for x in (l, m, family_size, d)):
        return l > m * family_size * d
    lhs = _ln(l)
    rhs = _ln(m) + _ln(family_size) + _ln(d)
    if rhs == -math.inf:
        return lhs > -math.inf
    return lhs - rhs > GUARD * max(1.0, abs(lhs), abs(rhs))


def all_types(instance: ConflictInstance) -> list[TypeKey]:
    return [TypeKey(c, i) for c in range(instance.m) for i in range(len(instance.family))]


def present_types(instance: ConflictInstance, psi: Sequence[int]) -> list[TypeKey]:
    return sorted({TypeKey(psi[v], instance.list_of[v]) for v in range(len(instance.list_of))})


def _first_compatible(lst: Any, chosen: list[Any], relation: Any, budget: int) -> Any:
    if isinstance(lst, LazySubsets):
        if not isinstance(relation, TauConflict):
            raise TypeError("lazy subset lists only support TauConflict")
        return lst.first_compatible(chosen, relation.tau, budget)
    steps = 0
    for e in lst:
        if not any(relation(e, c) for c in chosen):
            return e
        steps += len(chosen)
        if steps > budget:
            raise BudgetExceeded("zero-round greedy scan", steps, budget)
    return None


def solve_types(
    instance: ConflictInstance,
    d: Quantity | None = None,
    types: Sequence[TypeKey] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> dict[TypeKey, Any]:
    """Run the greedy over ``types`` (default: all of [m] x F) in sorted order.

    ``d`` must be an upper bound on the conflict degree of the family; it is
    computed exactly when omitted.  Restricting ``types`` to the types that
    occur weakens the precondition to l > len(types) * d.

    Raises:
        SolvabilityError: if the precondition fails.
        InvariantError: if some list runs out even though it holds.
    """
    if d is None:
        if any(isinstance(lst, LazySubsets) for lst in instance.family):
            raise ValueError("a conflict degree bound is required for lazy lists")
        d = conflict_degree(instance.relation, instance.family, budget)
    keys = sorted(types) if types is not None else all_types(instance)
    l = instance.list_size
    if types is None:
        ok = check_solvability(l, instance.m, len(instance.family), d)
    else:
        ok = check_solvability(l, len(keys), 1, d)
    if not ok:
        count = f"{instance.m} * {len(instance.family)}" if types is None else f"{len(keys)} types *"
        raise SolvabilityError(f"list size {l} does not exceed {count} * d (d = {d})")
    chosen: list[Any] = []
    table: dict[TypeKey, Any] = {}
    for key in keys:
        pick = _first_compatible(instance.family[key.family_index], chosen, instance.relation, budget)
        if pick is None:
            raise InvariantError(f"greedy found no compatible element for type {key}")
        table[key] = pick
        chosen.append(pick)
    return table


def zero_round_solve(
    instance: ConflictInstance,
    psi: Sequence[int],
    d: Quantity | None = None,
    *,
    restrict_types: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> tuple[Any, ...]:
    """Assign every vertex the element chosen for its type.

    With ``restrict_types`` only types that occur among the vertices take
    part in the greedy.
    """
    if len(psi) != len(instance.list_of):
        raise ValueError("psi must have one entry per vertex")
    types = present_types(instance, psi) if restrict_types else None
    table = solve_types(instance, d, types, budget)
    return tuple(table[TypeKey(psi[v], instance.list_of[v])] for v in range(len(psi)))


def max_tau_overlap_count(l0: int, k: int, tau: int) -> int:
    """How many k-subsets of an l0-set share >= tau colors with a fixed k-subset."""
    return sum(math.comb(k, i) * math.comb(l0 - k, k - i) for i in range(tau, k + 1))

