"""Subset enumeration, intersection conflicts and cover-free set families.

Subsets of a sorted base list are handled through their positions in that
base.  The canonical order is colexicographic: S precedes T when the largest
position in the symmetric difference belongs to T.
"""

from __future__ import annotations

import math
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 2_000_000

Sublist = tuple[int, ...]
SublistSystem = tuple[Sublist, ...]


def colex_rank(positions: Sequence[int]) -> int:
    """Rank of a sorted position tuple among all subsets of its size (colex)."""
    return sum(math.comb(p, i + 1) for i, p in enumerate(positions))


def colex_unrank(rank: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`colex_rank` for k-subsets."""
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    out = []
    for i in range(k, 0, -1):
        # largest p with C(p, i) <= rank
        p = i - 1
        while math.comb(p + 1, i) <= rank:
            p += 1
        out.append(p)
        rank -= math.comb(p, i)
    return tuple(reversed(out))


def rank_subset(subset: Sequence[int], base: Sequence[int]) -> int:
    """Colex rank of a subset of ``base`` (both given as colors)."""
    index = {c: i for i, c in enumerate(base)}
    try:
        positions = sorted(index[c] for c in subset)
    except KeyError as exc:
        raise ValueError(f"color {exc.args[0]} is not in the base list") from exc
    return colex_rank(positions)


def unrank_subset(rank: int, k: int, base: Sequence[int]) -> tuple[int, ...]:
    if rank >= math.comb(len(base), k):
        raise ValueError(f"rank {rank} out of range for {k}-subsets of {len(base)} items")
    return tuple(base[p] for p in colex_unrank(rank, k))


def _colex_positions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    if k > n or k < 0:
        return
    if k == 0:
        yield ()
        return
    c = list(range(k))
    while True:
        yield tuple(c)
        # find the lowest slot that can move up without colliding
        i = 0
        while i < k - 1 and c[i] + 1 == c[i + 1]:
            i += 1
        if i == k - 1 and c[i] + 1 == n:
            return
        c[i] += 1
        for j in range(i):
            c[j] = j


def enumerate_k_subsets(
    base: Sequence[int], k: int, budget: int = DEFAULT_BUDGET
) -> Iterator[tuple[int, ...]]:
    """Yield all k-subsets of the sorted ``base`` in colex order.

    Raises:
        BudgetExceeded: before yielding anything, if C(|base|, k) > budget.
    """
    total = math.comb(len(base), k) if 0 <= k <= len(base) else 0
    if total > budget:
        raise BudgetExceeded(f"{k}-subsets of a {len(base)}-element list", total, budget)
    for pos in _colex_positions(len(base), k):
        yield tuple(base[p] for p in pos)


def tau_conflict(a: Sequence[int], b: Sequence[int], tau: int) -> bool:
    """True when the two color sets share at least ``tau`` colors."""
    return len(set(a).intersection(b)) >= tau


def tau_tau_conflict(a: SublistSystem, b: SublistSystem, tau_prime: int, tau: int) -> bool:
    """(tau', tau)-conflict between two sublist systems.

    Holds when at least tau' distinct members of one system each share at
    least tau colors with some member of the other system.
    """
    sa = [set(x) for x in a]
    sb = [set(y) for y in b]
    hit = [[len(x & y) >= tau for y in sb] for x in sa]
    left = sum(1 for row in hit if any(row))
    if left >= tau_prime:
        return True
    right = sum(1 for j in range(len(sb)) if any(row[j] for row in hit))
    return right >= tau_prime


def first_free_subset(
    base: Sequence[int],
    k: int,
    tau: int,
    taken: Sequence[Sequence[int]],
    budget: int = DEFAULT_BUDGET,
) -> tuple[int, ...] | None:
    """Colex-first k-subset of ``base`` meeting every ``taken`` set in < tau colors.

    Depth-first search that fixes the largest position first.  A branch is
    cut as soon as the positions left to fill no longer fit, either into the
    elements outside one taken set plus that set's remaining allowance, or
    into the elements outside all taken sets plus all remaining allowances
    (every other element uses up at least one allowance).

    Returns None when no such subset exists.
    """
    n = len(base)
    if k > n:
        return None
    cap = tau - 1
    members = []
    for t in taken:
        ts = set(t)
        members.append([c in ts for c in base])
    r = len(members)
    # inside[j][v] = number of positions < v that lie in taken set j
    inside = []
    for mem in members:
        acc = [0] * (n + 1)
        for v in range(n):
            acc[v + 1] = acc[v] + mem[v]
        inside.append(acc)
    # free[v] = number of positions < v outside every taken set
    free = [0] * (n + 1)
    for v in range(n):
        free[v + 1] = free[v] + (not any(mem[v] for mem in members))
    counts = [0] * r
    chosen: list[int] = []
    steps = 0

    def fill(slot: int, upper: int) -> bool:
        nonlocal steps
        # slot = number of positions still to choose, all below `upper`
        if slot == 0:
            return True
        p = slot - 1
        for v in range(p, upper):
            steps += 1
            if steps > budget:
                raise BudgetExceeded("colex-first subset search", steps, budget)
            ok = True
            for j in range(r):
                c = counts[j] + members[j][v]
                if c > cap or (v - inside[j][v]) + (cap - c) < p:
                    ok = False
                    break
            if not ok or free[v] + sum(cap - counts[j] - members[j][v] for j in range(r)) < p:
                continue
            for j in range(r):
                counts[j] += members[j][v]
            chosen.append(v)
            if fill(p, v):
                return True
            chosen.pop()
            for j in range(r):
                counts[j] -= members[j][v]
        return False

    if not fill(k, n):
        return None
    return tuple(base[v] for v in sorted(chosen))


@dataclass(frozen=True)
class LazySubsets:
    """The k-subsets of a base list, in colex order, without materializing them.

    Used as a list inside a conflict instance; the zero-round greedy calls
    :meth:`first_compatible` instead of scanning.
    """

    base: tuple[int, ...]
    k: int

    @property
    def size(self) -> int:
        """C(|base|, k); may exceed what ``len`` can return."""
        return math.comb(len(self.base), self.k)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return enumerate_k_subsets(self.base, self.k, budget=self.size)

    def first_compatible(self, chosen: Sequence[Sequence[int]], tau: int,
                         budget: int = DEFAULT_BUDGET) -> tuple[int, ...] | None:
        return first_free_subset(self.base, self.k, tau, chosen, budget)


@dataclass(frozen=True)
class CoverFreeFamily:
    """Sets S_f = {(i, f(i))} of functions f: [x] -> [l], flattened to i*l + f(i)."""

    delta: int
    m: int
    z: int
    x: int
    l: int
    sets: tuple[tuple[int, ...], ...]

    @property
    def universe_size(self) -> int:
        return self.x * self.l

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "m": self.m,
            "z": self.z,
            "x": self.x,
            "l": self.l,
            "universeSize": self.universe_size,
            "sets": [list(s) for s in self.sets],
        }


def cover_free_shape(m: int, delta: int) -> tuple[int, int, int]:
    """Return (z, x, l) = (ceil(ln m), delta*z, ceil(e^2 x / z))."""
    z = math.ceil(math.log(m))
    x = delta * z
    l = math.ceil(math.e**2 * x / z)
    return z, x, l


def cover_free_bound(m: int, delta: int) -> float:
    """The size guarantee 5.2 * delta^2 * log2(e*m) for the universe."""
    return 5.2 * delta**2 * math.log2(math.e * m)


def greedy_cover_free(
    m: int, delta: int, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> CoverFreeFamily:
    """Greedy delta-cover-free family of m sets over a universe of x*l points.

    Functions [x] -> [l] are drawn from a fixed pseudo-random stream; a
    function is kept when it agrees with every kept function on fewer than
    z inputs.  Any pick order works for the size argument (at most
    C(x, z) l^(x-z) functions conflict with a kept one), so the stream only
    fixes which family is produced.  The first function is constant 0.

    Raises:
        ValueError: if m < 3 or delta < 2.
        BudgetExceeded: if more than ``budget`` candidates are examined.
    """
    if m < 3:
        raise ValueError(f"m must be at least 3, got {m}")
    if delta < 2:
        raise ValueError(f"delta must be at least 2, got {delta}")
    z, x, l = cover_free_shape(m, delta)
    rng = random.Random(f"cover-free/{seed}/{m}/{delta}")
    kept = np.zeros((m, x), dtype=np.int32)
    n_kept = 1
    tried = 1
    while n_kept < m:
        if tried >= budget:
            raise BudgetExceeded("cover-free candidate stream", tried + 1, budget)
        tried += 1
        cand = np.array([rng.randrange(l) for _ in range(x)], dtype=np.int32)
        agree = (kept[:n_kept] == cand).sum(axis=1)
        if agree.max() < z:
            kept[n_kept] = cand
            n_kept += 1
    sets = tuple(tuple(i * l + int(f[i]) for i in range(x)) for f in kept)
    return CoverFreeFamily(delta, m, z, x, l, sets)


@dataclass(frozen=True)
class CoverFreeReport:
    exhaustive: bool
    cover_free: bool
    max_intersection: int
    min_residual: int
    witness: tuple[int, tuple[int, ...]] | None = None


def verify_cover_free(
    sets: Sequence[Sequence[int]],
    delta: int,
    *,
    exhaustive_limit: int = 1_000_000,
    samples: int = 10_000,
    seed: int = 0,
) -> CoverFreeReport:
    """Check that no set is covered by the union of ``delta`` others.

    Every (set, delta-subset of the others) pair is examined when there are
    at most ``exhaustive_limit`` of them; otherwise ``samples`` random pairs
    are drawn.  ``min_residual`` is the smallest |S_0 minus the union| seen.
    """
    fam = [frozenset(s) for s in sets]
    m = len(fam)
    max_inter = max(
        (len(fam[i] & fam[j]) for i in range(m) for j in range(i + 1, m)), default=0
    )
    others_k = min(delta, m - 1)
    total = m * math.comb(m - 1, others_k)
    exhaustive = total <= exhaustive_limit
    min_res = min((len(s) for s in fam), default=0)
    witness = None

    def check(i: int, group: tuple[int, ...]) -> None:
        nonlocal min_res, witness
        union = frozenset().union(*(fam[j] for j in group))
        res = len(fam[i] - union)
        if res < min_res:
            min_res = res
        if res == 0 and witness is None:
            witness = (i, group)

    if exhaustive:
        for i in range(m):
            rest = [j for j in range(m) if j != i]
            for group in combinations(rest, others_k):
                check(i, group)
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            i = rng.randrange(m)
            rest = [j for j in range(m) if j != i]
            check(i, tuple(sorted(rng.sample(rest, others_k))))
    return CoverFreeReport(exhaustive, witness is None, max_inter, min_res, witness)


def log_binomial(n: int, k: int) -> float:
    """Natural log of C(n, k) for arbitrarily large integers.

    Small k (after using symmetry) is summed exactly term by term; otherwise
    log-gamma is used, with a series correction when n dwarfs k.
    """
    if k < 0 or k > n:
        raise ValueError(f"C({n}, {k}) is zero")
    k = min(k, n - k)
    if k == 0:
        return 0.0
    if k <= 100_000:
        return math.fsum(math.log(n - i) - math.log(i + 1) for i in range(k))
    if n < k * 1_000_000:
        return math.lgamma(n + 1) - math.lgamma(n - k + 1) - math.lgamma(k + 1)
    # n >> k: sum ln(n - i) = k ln n + sum ln(1 - i/n) ~ k ln n - k(k-1)/(2n)
    return k * math.log(n) - k * (k - 1) / (2 * n) - math.lgamma(k + 1)
