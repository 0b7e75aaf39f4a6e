"""Brute-force reference implementations.

Each function here recomputes a quantity from its definition with plain
itertools, sharing no code with the optimized routines it is compared
against (colex enumeration, bitmasks, numpy templates, lazy search).
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence


def tau_conflict_def(a: Sequence[int], b: Sequence[int], tau: int) -> bool:
    return sum(1 for c in a if c in b) >= tau


def tau_tau_conflict_by_sequences(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], tau_prime: int, tau: int
) -> bool:
    """Search for sequences C_1..C_t' in a and C'_1..C'_t' in b with C_i, C'_i
    tau-conflicting for all i and one of the sequences free of repeats."""
    for left in itertools.product(range(len(a)), repeat=tau_prime):
        for right in itertools.product(range(len(b)), repeat=tau_prime):
            if len(set(left)) < tau_prime and len(set(right)) < tau_prime:
                continue
            if all(tau_conflict_def(a[i], b[j], tau) for i, j in zip(left, right)):
                return True
    return False


def max_tau_conflicts(x: Sequence[int], y: Sequence[int], k: int, tau: int) -> int:
    """max over k-subsets C of x of the number of k-subsets of y meeting C in >= tau colors."""
    ys = [set(c) for c in itertools.combinations(sorted(y), k)]
    return max(
        (sum(1 for d in ys if len(set(c) & d) >= tau) for c in itertools.combinations(sorted(x), k)),
        default=0,
    )


def level2_lists(
    base: Sequence[int], k: int, tau: int, k_prime: int, tau_prime: int, threshold: int
) -> tuple[list[tuple[tuple[int, ...], ...]], list[int]]:
    """Systems of k'-many k-subsets of ``base`` with fewer than ``threshold``
    conflicting systems (itself included), and every system's conflict count."""
    subs = list(itertools.combinations(sorted(base), k))
    systems = list(itertools.combinations(subs, k_prime))
    counts = [
        sum(1 for other in systems if tau_tau_conflict_by_sequences(s, other, tau_prime, tau))
        for s in systems
    ]
    return [s for s, c in zip(systems, counts) if c < threshold], counts


def directed_count(
    system: Sequence[Sequence[int]], others: Sequence[Sequence[Sequence[int]]], tau_prime: int, tau: int
) -> int:
    """Number of systems K' for which >= tau' distinct members of ``system`` meet some member of K'."""
    total = 0
    for other in others:
        hit = sum(1 for c in system if any(tau_conflict_def(c, d, tau) for d in other))
        total += hit >= tau_prime
    return total


def is_cover_free(sets: Sequence[Sequence[int]], delta: int) -> bool:
    """No set is contained in the union of delta others."""
    for i, s in enumerate(sets):
        rest = [set(t) for j, t in enumerate(sets) if j != i]
        for group in itertools.combinations(rest, min(delta, len(rest))):
            if set(s) <= set().union(*group):
                return False
    return True


def conflicting_types(table: dict, relation) -> list[tuple]:
    """Pairs of distinct types whose assigned elements conflict."""
    bad = []
    for (s, a), (t, b) in itertools.combinations(sorted(table.items()), 2):
        if relation(a, b):
            bad.append((s, t))
    return bad


def defect_counts(adjacency: Sequence[Sequence[int]], colors: Sequence[int]) -> list[int]:
    return [sum(1 for u in adjacency[v] if colors[u] == colors[v]) for v in range(len(colors))]


def max_outdegree(out: Sequence[Sequence[int]]) -> int:
    return max((len(o) for o in out), default=0)
