"""Parameters and list families for two-level list coloring.

From a base list S of l0 colors we build

* L1(S): all k-subsets of S, ordered colexicographically;
* the candidate systems: all k'-subsets of L1(S), in colex order of the
  member indices;
* L2(S): the candidate systems K that (tau', tau)-conflict with fewer than
  t of the candidate systems (K itself included), where t defaults to d2.

Only the relative order of the colors in S matters, so the level-2 data is
computed once on the base 0..l0-1 (a *template*) and mapped onto any S.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .combinatorics import (
    DEFAULT_BUDGET,
    Sublist,
    SublistSystem,
    enumerate_k_subsets,
    log_binomial,
)
from .conflict_core import LogValue, max_tau_overlap_count
from .errors import BudgetExceeded, ParameterError

LN2 = math.log(2)
EXACT_K_PRIME_LIMIT = 4096
PAIR_BUDGET = 200_000_000


class Mode(str, Enum):
    PAPER = "paper"
    DESK = "desk"


def log2(x: float) -> float:
    return math.log2(x)


def loglog(x: float) -> float:
    """log2(log2(x)), taken as 0 for x <= 2."""
    return 0.0 if x <= 2 else math.log2(math.log2(x))


def d1_value(l0: int, k: int, tau: int) -> int:
    return math.comb(k, tau) * math.comb(l0 - tau, k - tau)


def d2_value(l0: int, k: int, tau: int, k_prime: int, tau_prime: int) -> int:
    l1 = math.comb(l0, k)
    d1 = d1_value(l0, k, tau)
    return 4 * math.comb(k_prime * d1, tau_prime) * math.comb(l1 - tau_prime, k_prime - tau_prime)


@dataclass(frozen=True)
class ParameterSet:
    """All sizes used by the two-level construction.

    Exact integers are kept when they are cheap to compute; the ``ln_*``
    fields always hold natural logarithms.  ``lbar2`` is the number of
    candidate systems, so the level-2 size guarantee is l2 = lbar2 / 2.
    """

    mode: Mode
    beta: int
    m: int
    colorspace_size: int
    tau: int
    tau_prime: int
    k: int
    k_prime: int
    l0: int
    l1: int
    d1: int
    lbar2: int | None
    d2: int | None
    ln_l1: float
    ln_d1: float
    ln_lbar2: float
    ln_d2: float

    @property
    def ln_l2(self) -> float:
        return self.ln_lbar2 - LN2

    @property
    def l2_quantity(self) -> int | LogValue:
        if self.lbar2 is not None and self.lbar2 % 2 == 0:
            return self.lbar2 // 2
        return LogValue(self.ln_l2)

    @property
    def d2_quantity(self) -> int | LogValue:
        return self.d2 if self.d2 is not None else LogValue(self.ln_d2)

    def to_dict(self) -> dict:
        def small(x: int | None) -> int | None:
            return x if x is not None and x.bit_length() <= 63 else None

        return {
            "mode": self.mode.value,
            "beta": self.beta,
            "m": self.m,
            "colorspaceSize": self.colorspace_size,
            "tau": self.tau,
            "tauPrime": self.tau_prime,
            "k": self.k,
            "kPrime": self.k_prime,
            "l0": self.l0,
            "l1": small(self.l1),
            "d1": small(self.d1),
            "lbar2": small(self.lbar2),
            "d2": small(self.d2),
            "lnL1": self.ln_l1,
            "lnD1": self.ln_d1,
            "lnL2": self.ln_l2,
            "lnD2": self.ln_d2,
        }


def _build(mode: Mode, beta: int, m: int, csize: int, tau: int, tau_prime: int,
           k: int, k_prime: int, l0: int) -> ParameterSet:
    l1 = math.comb(l0, k)
    d1 = d1_value(l0, k, tau)
    ln_l1 = log_binomial(l0, k)
    ln_d1 = math.log(d1)
    if k_prime <= EXACT_K_PRIME_LIMIT:
        lbar2 = math.comb(l1, k_prime)
        d2 = d2_value(l0, k, tau, k_prime, tau_prime)
        ln_lbar2 = math.log(lbar2) if lbar2 > 0 else -math.inf
        ln_d2 = math.log(d2) if d2 > 0 else -math.inf
    else:
        lbar2 = d2 = None
        ln_lbar2 = log_binomial(l1, k_prime)
        ln_d2 = (
            math.log(4)
            + log_binomial(k_prime * d1, tau_prime)
            + log_binomial(l1 - tau_prime, k_prime - tau_prime)
        )
    return ParameterSet(mode, beta, m, csize, tau, tau_prime, k, k_prime, l0,
                        l1, d1, lbar2, d2, ln_l1, ln_d1, ln_lbar2, ln_d2)


def paper_tau(beta: int, colorspace_size: int, m: int) -> int:
    return math.ceil(8 * log2(beta) + 2 * loglog(colorspace_size) + 2 * loglog(m)) + 14


OVERRIDE_KEYS = ("tau", "tau_prime", "k", "k_prime", "l0")


def derive_parameters(
    beta: int,
    m: int,
    colorspace_size: int,
    mode: Mode | str = Mode.PAPER,
    overrides: Mapping[str, int] | None = None,
) -> ParameterSet:
    """Compute the parameter set.

    In paper mode every value follows from (beta, |C|, m).  In desk mode the
    five values tau, tau_prime, k, k_prime and l0 come from ``overrides`` and
    are checked against tau <= k <= beta * tau, tau' <= k' and
    l0 >= 2e k^2 / tau.

    Raises:
        ParameterError: naming the violated constraint.
    """
    mode = Mode(mode)
    if beta < 1:
        raise ParameterError(f"beta must be at least 1, got {beta}")
    if m < 2:
        raise ParameterError(f"m must be at least 2, got {m}")
    if colorspace_size < 2:
        raise ParameterError(f"the color space must have at least 2 colors, got {colorspace_size}")
    if mode is Mode.PAPER:
        if overrides:
            raise ParameterError("overrides are only accepted in desk mode")
        tau = paper_tau(beta, colorspace_size, m)
        tau_prime = 2 ** (tau - math.ceil(log2(2 * math.e * beta**2)))
        k = beta * tau
        k_prime = beta * tau_prime
        l0 = math.ceil(2 * math.e * beta**2 * (tau + 1))
        return _build(mode, beta, m, colorspace_size, tau, tau_prime, k, k_prime, l0)

    missing = [key for key in OVERRIDE_KEYS if not overrides or key not in overrides]
    if missing:
        raise ParameterError(f"desk mode needs overrides for: {', '.join(missing)}")
    tau, tau_prime, k, k_prime, l0 = (int(overrides[key]) for key in OVERRIDE_KEYS)
    if tau < 1:
        raise ParameterError(f"constraint tau >= 1 violated (tau = {tau})")
    if not tau <= k:
        raise ParameterError(f"constraint tau <= k violated (tau = {tau}, k = {k})")
    if not k <= beta * tau:
        raise ParameterError(f"constraint k <= beta*tau violated (k = {k}, beta*tau = {beta * tau})")
    if not 1 <= tau_prime <= k_prime:
        raise ParameterError(f"constraint 1 <= tau' <= k' violated (tau' = {tau_prime}, k' = {k_prime})")
    if not l0 * tau >= 2 * math.e * k * k:
        raise ParameterError(
            f"constraint l0 >= 2e*k^2/tau violated (l0 = {l0}, 2e*k^2/tau = {2 * math.e * k * k / tau:.3f})"
        )
    if l0 > colorspace_size:
        raise ParameterError(f"constraint l0 <= |C| violated (l0 = {l0}, |C| = {colorspace_size})")
    return _build(mode, beta, m, colorspace_size, tau, tau_prime, k, k_prime, l0)


def build_L1(base: Sequence[int], params: ParameterSet, budget: int = DEFAULT_BUDGET) -> list[Sublist]:
    """All k-subsets of the base list in colex order."""
    if len(base) < params.k:
        raise ParameterError(f"base list of size {len(base)} is shorter than k = {params.k}")
    return list(enumerate_k_subsets(tuple(base), params.k, budget))


@dataclass(frozen=True)
class L2Template:
    """Level-2 data on the base 0..l0-1.

    ``conflict_counts[i]`` is the number of candidate systems that conflict
    with system i (itself included); ``out_counts[i]`` counts those K' for
    which at least tau' members of system i meet a member of K' in tau colors.
    """

    l0: int
    k: int
    tau: int
    k_prime: int
    tau_prime: int
    threshold: int
    sublists: tuple[tuple[int, ...], ...]
    systems: tuple[tuple[int, ...], ...]
    conflict_counts: tuple[int, ...]
    out_counts: tuple[int, ...]
    good: tuple[int, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.good)

    @property
    def d_hat(self) -> int:
        """Largest conflict count among kept systems.

        Bounds the conflict degree of any family of L2 lists built with
        these parameters: between L2(X) and L2(Y) the conflicts of a system
        can be mapped injectively into those it has inside its own list.
        """
        return max((self.conflict_counts[i] for i in self.good), default=0)

    def system(self, index: int, base: Sequence[int]) -> SublistSystem:
        return tuple(tuple(base[p] for p in self.sublists[j]) for j in self.systems[index])


_TEMPLATES: dict[tuple[int, int, int, int, int, int], L2Template] = {}


def _conflict_matrix(sublists: Sequence[tuple[int, ...]], l0: int, tau: int) -> np.ndarray:
    inc = np.zeros((len(sublists), l0), dtype=np.int32)
    for i, s in enumerate(sublists):
        inc[i, list(s)] = 1
    return (inc @ inc.T) >= tau


def l2_template(
    l0: int,
    k: int,
    tau: int,
    k_prime: int,
    tau_prime: int,
    threshold: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> L2Template:
    """Enumerate and classify all candidate systems on the base 0..l0-1.

    Raises:
        BudgetExceeded: if the number of systems exceeds ``budget`` or the
            pairwise comparison would exceed an internal work limit.
    """
    if threshold is None:
        threshold = d2_value(l0, k, tau, k_prime, tau_prime)
    key = (l0, k, tau, k_prime, tau_prime, threshold)
    cached = _TEMPLATES.get(key)
    if cached is not None:
        return cached
    sublists = list(enumerate_k_subsets(tuple(range(l0)), k, budget))
    l1 = len(sublists)
    n_sys = math.comb(l1, k_prime)
    if n_sys > budget:
        raise BudgetExceeded(f"{k_prime}-subsets of L1 with |L1| = {l1}", n_sys, budget)
    if n_sys * n_sys * k_prime * k_prime > PAIR_BUDGET:
        raise BudgetExceeded("pairwise system comparison", n_sys * n_sys * k_prime * k_prime, PAIR_BUDGET)
    systems = list(enumerate_k_subsets(tuple(range(l1)), k_prime, budget))
    hit = _conflict_matrix(sublists, l0, tau)
    sys_arr = np.array(systems, dtype=np.int64).reshape(n_sys, k_prime)
    counts = np.zeros(n_sys, dtype=np.int64)
    outs = np.zeros(n_sys, dtype=np.int64)
    block = max(1, 20_000_000 // max(1, n_sys * k_prime * k_prime))
    for start in range(0, n_sys, block):
        rows = sys_arr[start : start + block]
        # r[b, i, K', j]: member i of row b meets member j of K' in >= tau colors
        r = hit[rows][:, :, sys_arr]
        left = r.any(axis=3).sum(axis=1)
        right = r.any(axis=1).sum(axis=2)
        counts[start : start + block] = ((left >= tau_prime) | (right >= tau_prime)).sum(axis=1)
        outs[start : start + block] = (left >= tau_prime).sum(axis=1)
    good = tuple(int(i) for i in np.flatnonzero(counts < threshold))
    tpl = L2Template(
        l0, k, tau, k_prime, tau_prime, threshold,
        tuple(sublists), tuple(systems),
        tuple(int(c) for c in counts), tuple(int(c) for c in outs), good,
    )
    _TEMPLATES[key] = tpl
    return tpl


@dataclass(frozen=True)
class L2Summary:
    """Size of L2(S) and the conflict-degree bound for one parameter choice."""

    size: int
    d_hat: int
    all_good: bool


def l2_summary(params: ParameterSet, budget: int = DEFAULT_BUDGET) -> L2Summary:
    """|L2(S)| and the conflict-degree bound, in closed form when k' = 1.

    With single-member systems the conflict relation reduces to tau-conflict
    between the members, and every k-subset meets the same number of
    k-subsets in >= tau colors, so either all systems are kept or none.
    """
    threshold = params.d2 if params.d2 is not None else None
    if params.k_prime == 1:
        count = max_tau_overlap_count(params.l0, params.k, params.tau)
        good = threshold is None or count < threshold
        return L2Summary(params.l1 if good else 0, count if good else 0, good)
    tpl = l2_template(params.l0, params.k, params.tau, params.k_prime, params.tau_prime,
                      threshold, budget)
    return L2Summary(tpl.size, tpl.d_hat, tpl.size == len(tpl.systems))


def build_L2(
    base: Sequence[int],
    params: ParameterSet,
    budget: int = DEFAULT_BUDGET,
    threshold: int | None = None,
) -> list[SublistSystem]:
    """L2(S) for the normalized base list S, in canonical order.

    ``threshold`` replaces d2 as the goodness cut-off.
    """
    base = tuple(base)
    if len(base) != params.l0:
        raise ParameterError(f"base list has size {len(base)}, expected l0 = {params.l0}")
    if params.d2 is None and threshold is None:
        raise BudgetExceeded("level-2 enumeration in paper mode", math.exp(min(params.ln_lbar2, 700)), budget)
    t = threshold if threshold is not None else params.d2
    tpl = l2_template(params.l0, params.k, params.tau, params.k_prime, params.tau_prime, t, budget)
    return [tpl.system(i, base) for i in tpl.good]


@dataclass(frozen=True)
class D1Report:
    """Per sample pair: the largest tau-conflict count and the bound d1 for |X|."""

    counts: tuple[int, ...]
    bounds: tuple[int, ...]

    @property
    def max_count(self) -> int:
        return max(self.counts, default=0)

    @property
    def holds(self) -> bool:
        return all(c <= b for c, b in zip(self.counts, self.bounds))

    def violations(self) -> list[int]:
        return [i for i, (c, b) in enumerate(zip(self.counts, self.bounds)) if c > b]


def verify_conflict_degree_d1(
    k: int,
    tau: int,
    samples: Sequence[tuple[Sequence[int], Sequence[int]]],
    budget: int = DEFAULT_BUDGET,
) -> D1Report:
    """Largest number of k-subsets of Y meeting one k-subset of X in >= tau colors.

    Lists in a pair must have equal size l0; the bound is d1 for that l0.
    """
    per_pair = []
    bounds = []
    for x, y in samples:
        if len(x) != len(y):
            raise ParameterError(f"list sizes differ: {len(x)} and {len(y)}")
        lx = list(enumerate_k_subsets(tuple(x), k, budget))
        ly = list(enumerate_k_subsets(tuple(y), k, budget))
        if len(lx) * len(ly) > PAIR_BUDGET:
            raise BudgetExceeded("d1 verification", len(lx) * len(ly), PAIR_BUDGET)
        colors = sorted(set(x) | set(y))
        pos = {c: i for i, c in enumerate(colors)}
        ax = np.zeros((len(lx), len(colors)), dtype=np.int32)
        ay = np.zeros((len(ly), len(colors)), dtype=np.int32)
        for i, s in enumerate(lx):
            ax[i, [pos[c] for c in s]] = 1
        for i, s in enumerate(ly):
            ay[i, [pos[c] for c in s]] = 1
        per_pair.append(int(((ax @ ay.T) >= tau).sum(axis=1).max(initial=0)))
        bounds.append(d1_value(len(x), k, tau))
    return D1Report(tuple(per_pair), tuple(bounds))


@dataclass(frozen=True)
class RatioCheck:
    """One inequality lhs > rhs (or lhs <= rhs for chain steps).

    ``holds`` is None when the hypothesis of the statement is not met and no
    claim is made.
    """

    name: str
    holds: bool | None
    lhs: float
    rhs: float
    note: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "lhs": self.lhs, "rhs": self.rhs, "note": self.note}


@dataclass(frozen=True)
class RatioReport:
    checks: tuple[RatioCheck, ...]

    def get(self, name: str) -> RatioCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(c.holds is not False for c in self.checks)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


GUARD = 1e-6


def _gt(name: str, lhs: float, rhs: float, note: str = "") -> RatioCheck:
    return RatioCheck(name, lhs - rhs > GUARD * max(1.0, abs(rhs)), lhs, rhs, note)


def _le(name: str, lhs: float, rhs: float, note: str = "") -> RatioCheck:
    return RatioCheck(name, lhs <= rhs + 1e-9 * max(1.0, abs(rhs)), lhs, rhs, note)


def verify_ld_ratio(params: ParameterSet) -> RatioReport:
    """Check the list-size to conflict-degree ratios the construction relies on.

    * ``l0-hypothesis``: l0 >= 2e k^2 / tau.
    * ``l1/d1``: l1/d1 > 2^tau (only claimed under the l0 hypothesis).
    * ``l2/d2``: l2/d2 > 2^(2^(tau - log2(4e beta^2))) / 8, claimed when
      tau >= ceil(log2(2e beta^2)), tau' = 2^(tau - that), k' = beta tau'.
    * In paper mode also ``l2/d2 vs m|C|^l0``, ``double-exponential`` and
      the four steps ``chain-1`` ... ``chain-4`` of the estimate
      log2 log2(8 m |C|^l0) <= tau - log2(4e beta^2), evaluated with the
      unrounded l0 = 2e beta^2 (tau + 1).

    All comparisons are made on logarithms (base 2 for ``l1/d1``, natural
    otherwise, as recorded in lhs/rhs).
    """
    p = params
    checks: list[RatioCheck] = []
    bound = 2 * math.e * p.k**2 / p.tau
    hyp = p.l0 >= bound
    checks.append(RatioCheck("l0-hypothesis", hyp, float(p.l0), bound, "l0 >= 2e k^2 / tau"))
    if hyp:
        if p.l1 is not None and p.d1 is not None:
            exact = p.l1 > p.d1 * 2**p.tau
            checks.append(RatioCheck("l1/d1", exact, (p.ln_l1 - p.ln_d1) / LN2, float(p.tau),
                                     "exact integer comparison; values are log2"))
        else:
            checks.append(_gt("l1/d1", (p.ln_l1 - p.ln_d1) / LN2, float(p.tau)))
    else:
        checks.append(RatioCheck("l1/d1", None, (p.ln_l1 - p.ln_d1) / LN2, float(p.tau),
                                 "l0 hypothesis not met"))

    c0 = math.ceil(log2(2 * math.e * p.beta**2))
    lemma_hyp = (p.k >= p.tau >= c0 and p.tau_prime == 2 ** (p.tau - c0)
                 and p.k_prime == p.beta * p.tau_prime)
    exponent = 2.0 ** (p.tau - log2(4 * math.e * p.beta**2))
    rhs = exponent * LN2 - math.log(8)
    lhs = p.ln_l2 - p.ln_d2
    if lemma_hyp:
        checks.append(_gt("l2/d2", lhs, rhs, "natural logs"))
    else:
        checks.append(RatioCheck("l2/d2", None, lhs, rhs, "tau/tau'/k' relation not met"))

    if p.mode is Mode.PAPER:
        lnC = math.log(p.colorspace_size)
        checks.append(_gt("l2/d2 vs m|C|^l0", lhs, math.log(p.m) + p.l0 * lnC, "natural logs"))
        need = log2(3 + log2(p.m) + p.l0 * log2(p.colorspace_size))
        checks.append(RatioCheck(
            "double-exponential",
            p.tau - log2(4 * math.e * p.beta**2) >= need,
            need, p.tau - log2(4 * math.e * p.beta**2),
            "log2 log2(8 m |C|^l0) <= tau - log2(4e beta^2)",
        ))
        l0_real = 2 * math.e * p.beta**2 * (p.tau + 1)
        llm = loglog(p.m)
        llc = loglog(p.colorspace_size)
        lb = log2(p.beta)
        s0 = log2(3 + log2(p.m) + l0_real * log2(p.colorspace_size))
        s1 = llm + log2(l0_real) + llc + log2(3)
        s2 = llm + log2(2 * math.e) + log2(3) + 2 * lb + log2(p.tau + 1) + llc
        s3 = p.tau / 2 + llm + log2(2 * math.e) + log2(3) + 2 * lb + llc
        s4 = p.tau - log2(4 * math.e * p.beta**2)
        checks.append(_le("chain-1", s0, s1, "log(x+y) <= log x + log y"))
        checks.append(_le("chain-2", s1, s2, "substitute l0 = 2e beta^2 (tau+1)"))
        checks.append(_le("chain-3", s2, s3, "log(tau+1) <= tau/2"))
        checks.append(_le("chain-4", s3, s4, "tau/2 >= 4 log beta + loglog|C| + loglog m + 7"))
    return RatioReport(tuple(checks))


def collapsed(params: ParameterSet) -> bool:
    """True when systems have a single member, so level 2 mirrors level 1."""
    return params.k_prime == 1 and params.tau_prime == 1
