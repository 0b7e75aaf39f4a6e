"""Verification suites: library routines checked against brute-force oracles and bounds."""

from __future__ import annotations

import itertools
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field

from . import oracles
from .combinatorics import DEFAULT_BUDGET, tau_tau_conflict
from .conflict_core import ConflictInstance, Equality, PairRelation, TauTauConflict, TypeKey, solve_types
from .errors import BudgetExceeded, ListColorError
from .list_framework import (
    Mode,
    d2_value,
    derive_parameters,
    l2_template,
    verify_conflict_degree_d1,
    verify_ld_ratio,
)


@dataclass
class SuiteResult:
    name: str
    ok: bool
    checked: int
    seconds: float = 0.0
    details: dict = field(default_factory=dict)
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "details": self.details,
            "witness": self.witness,
        }


def suite_d1(max_l0: int = 7, max_k: int = 4, budget: int = DEFAULT_BUDGET) -> SuiteResult:
    """Largest tau-conflict count against d1 for every l0 <= max_l0, tau <= k <= max_k.

    X = {0..l0-1} is paired with Y = {s..s+l0-1} for every shift s in 0..l0,
    so equal, overlapping and disjoint lists all occur.  The numpy count must
    agree with the itertools oracle and stay within d1.
    """
    checked = 0
    for l0 in range(1, max_l0 + 1):
        for k in range(1, min(max_k, l0) + 1):
            for tau in range(1, k + 1):
                x = tuple(range(l0))
                pairs = [(x, tuple(range(s, s + l0))) for s in range(l0 + 1)]
                rep = verify_conflict_degree_d1(k, tau, pairs, budget)
                for (a, b), got, bound in zip(pairs, rep.counts, rep.bounds):
                    checked += 1
                    want = oracles.max_tau_conflicts(a, b, k, tau)
                    if got != want or got > bound:
                        return SuiteResult("d1", False, checked, witness={
                            "l0": l0, "k": k, "tau": tau, "X": list(a), "Y": list(b),
                            "count": got, "oracle": want, "d1": bound})
    return SuiteResult("d1", True, checked)


L2_CASE = (5, 2, 1, 2, 2)


def _canon(systems) -> set[frozenset[tuple[int, ...]]]:
    return {frozenset(tuple(sorted(c)) for c in system) for system in systems}


def suite_l2_size(colorspace_size: int = 7, case: tuple[int, int, int, int, int] = L2_CASE,
                  budget: int = DEFAULT_BUDGET) -> SuiteResult:
    """|L2(S)| >= ceil(C(l1, k')/2) and directed conflict counts <= d2/4.

    Runs over every l0-subset S of {0..|C|-1}; L2(S) is compared with the
    oracle's level-2 list, and the directed count of every K in L2(S) is
    taken against every L2(S').
    """
    l0, k, tau, kp, tp = case
    d2 = d2_value(l0, k, tau, kp, tp)
    l1 = math.comb(l0, k)
    lower = math.ceil(math.comb(l1, kp) / 2)
    tpl = l2_template(l0, k, tau, kp, tp, d2, budget)
    bases = list(itertools.combinations(range(colorspace_size), l0))
    lists = {}
    checked = 0
    for s in bases:
        # the case violates l0 >= 2e k^2/tau, so it is built from the template directly
        got = [tpl.system(i, s) for i in tpl.good]
        want, _ = oracles.level2_lists(s, k, tau, kp, tp, d2)
        checked += 1
        if _canon(got) != _canon(want) or len(got) < lower:
            return SuiteResult("l2-size", False, checked, witness={
                "base": list(s), "size": len(got), "oracleSize": len(want), "lowerBound": lower})
        lists[s] = got
    worst = 0
    for s, sys_s in lists.items():
        for t, sys_t in lists.items():
            for system in sys_s:
                worst = max(worst, oracles.directed_count(system, sys_t, tp, tau))
    ok = worst <= d2 / 4
    return SuiteResult("l2-size", ok, checked, details={
        "case": list(case), "l2": tpl.size, "lowerBound": lower, "d2": d2,
        "maxDirected": worst, "directedBound": d2 / 4},
        witness=None if ok else {"maxDirected": worst, "bound": d2 / 4})


DESK_RATIO = {"tau": 1, "k": 2, "l0": 22, "tau_prime": 1, "k_prime": 1}
PAPER_RATIO = ((1, 2, 2), (2, 2**16, 2**8))


def suite_ld_ratio(paper_sets: tuple[tuple[int, int, int], ...] = PAPER_RATIO) -> SuiteResult:
    """Exact l1/d1 at (tau, k, l0) = (1, 2, 22) and every log-domain check in paper mode."""
    desk = derive_parameters(2, 2, 22, Mode.DESK, DESK_RATIO)
    details: dict = {"desk": {"l1": desk.l1, "d1": desk.d1, "ratio": desk.l1 / desk.d1}}
    ok = desk.l1 > 2 * desk.d1 and verify_ld_ratio(desk).ok
    failed = []
    checked = 1
    for beta, csize, m in paper_sets:
        params = derive_parameters(beta, m, csize, Mode.PAPER)
        rep = verify_ld_ratio(params)
        key = f"beta={beta},C={csize},m={m}"
        details[key] = rep.to_dict()
        for c in rep.checks:
            checked += 1
            if c.holds is False:
                failed.append({"set": key, "check": c.name, "lhs": c.lhs, "rhs": c.rhs})
    ok = ok and not failed
    return SuiteResult("ld-ratio", ok, checked, details=details, witness={"failed": failed} if failed else None)


def _systems(universe: int, k: int, kp: int) -> list[tuple[tuple[int, ...], ...]]:
    subs = list(itertools.combinations(range(universe), k))
    return list(itertools.combinations(subs, kp))


def suite_tau_tau(universe: int = 4) -> SuiteResult:
    """Set-count and bitmask (tau', tau)-conflict tests agree with the sequence definition."""
    checked = 0
    for k in range(1, 3):
        for kp in range(1, 4):
            systems = _systems(universe, k, kp)
            for tau in range(1, k + 1):
                for tp in range(1, kp + 1):
                    rel = TauTauConflict(tp, tau)
                    for a, b in itertools.product(systems, repeat=2):
                        want = oracles.tau_tau_conflict_by_sequences(a, b, tp, tau)
                        got = (tau_tau_conflict(a, b, tp, tau), rel(a, b))
                        checked += 1
                        if got != (want, want):
                            return SuiteResult("tau-tau", False, checked, witness={
                                "a": a, "b": b, "tauPrime": tp, "tau": tau, "got": got, "oracle": want})
    return SuiteResult("tau-tau", True, checked)


def _zero_round_case(relation, conflicts: Callable[[int, int], bool], family, m, d) -> dict | None:
    inst = ConflictInstance(relation, family, (), m, None)
    table = solve_types(inst, d)
    for key, c in table.items():
        if c not in family[key.family_index]:
            return {"type": [key.input_color, key.family_index], "element": c, "family": family}
    for (s, a), (t, b) in itertools.combinations(sorted(table.items()), 2):
        if conflicts(a, b):
            return {"types": [[s.input_color, s.family_index], [t.input_color, t.family_index]],
                    "elements": [a, b], "family": [list(x) for x in family], "m": m}
    return None


def _subsets(universe: int, min_size: int) -> list[tuple[int, ...]]:
    return [c for r in range(min_size, universe + 1) for c in itertools.combinations(range(universe), r)]


def suite_zero_round(max_m: int = 3, max_family: int = 3, equality_universe: int = 8,
                     relation_universe: int = 4) -> SuiteResult:
    """Greedy type coloring is conflict-free whenever l > m |F| d.

    Exhaustive over families of at most ``max_family`` distinct lists and
    m <= ``max_m`` for (a) equality on a universe of ``equality_universe``
    elements and (b) every symmetric relation (loops allowed) on a universe
    of ``relation_universe`` elements.
    """
    start = time.perf_counter()
    checked = 0
    eq = Equality()
    # equality has conflict degree 1 on any nonempty family
    for m in range(1, max_m + 1):
        for nf in range(1, max_family + 1):
            pool = _subsets(equality_universe, m * nf + 1)
            for family in itertools.combinations(pool, nf):
                checked += 1
                bad = _zero_round_case(eq, lambda a, b: a == b, family, m, 1)
                if bad:
                    return SuiteResult("zero-round", False, checked, witness={"relation": "equality", **bad})
    u = relation_universe
    subs = _subsets(u, 1)
    families = [f for nf in range(1, max_family + 1) for f in itertools.combinations(range(len(subs)), nf)]
    pairs = [(a, b) for a in range(u) for b in range(a, u)]
    for bits in range(1 << len(pairs)):
        chosen = [p for i, p in enumerate(pairs) if bits >> i & 1]
        edges = {frozenset(p) for p in chosen}
        rel = PairRelation.from_pairs(chosen)
        # hits[c][j]: elements of subset j related to c
        hits = [[sum(1 for c2 in sub if frozenset((c, c2)) in edges) for sub in subs] for c in range(u)]
        for fam in families:
            family = tuple(subs[j] for j in fam)
            d = max(hits[c][j] for i in fam for c in subs[i] for j in fam)
            size = min(len(x) for x in family)
            for m in range(1, max_m + 1):
                if size <= m * len(fam) * d:
                    break
                checked += 1
                bad = _zero_round_case(rel, lambda a, b: frozenset((a, b)) in edges, family, m, None)
                if bad:
                    return SuiteResult("zero-round", False, checked,
                                       witness={"relation": sorted(map(list, chosen)), **bad})
    return SuiteResult("zero-round", True, checked, time.perf_counter() - start)


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "d1": suite_d1,
    "l2-size": suite_l2_size,
    "ld-ratio": suite_ld_ratio,
    "tau-tau": suite_tau_tau,
    "zero-round": lambda: suite_zero_round(equality_universe=6),
}


def run_suites(names: list[str], budget: int = DEFAULT_BUDGET) -> list[SuiteResult]:
    """Run the named suites; budget overruns are reported as failures."""
    out = []
    for name in names:
        start = time.perf_counter()
        try:
            if name in ("d1", "l2-size"):
                res = SUITES[name](budget=budget)
            else:
                res = SUITES[name]()
        except (BudgetExceeded, ListColorError) as exc:
            res = SuiteResult(name, False, 0, witness={"error": str(exc)})
        res.seconds = time.perf_counter() - start
        out.append(res)
    return out


__all__ = ["SUITES", "SuiteResult", "TypeKey", "run_suites"]
