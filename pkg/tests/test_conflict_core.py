from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from listcolor import oracles
from listcolor.combinatorics import LazySubsets
from listcolor.conflict_core import (
    ConflictInstance,
    Equality,
    LogValue,
    PairRelation,
    TauConflict,
    TauTauConflict,
    TypeKey,
    check_solvability,
    conflict_degree,
    max_tau_overlap_count,
    solve_types,
    zero_round_solve,
)
from listcolor.errors import SolvabilityError

color_sets = st.sets(st.integers(0, 9), min_size=1, max_size=5).map(lambda s: tuple(sorted(s)))
systems = st.lists(color_sets, min_size=1, max_size=3, unique=True).map(tuple)


@settings(max_examples=200, deadline=None)
@given(systems, systems, st.integers(1, 3), st.integers(1, 3))
def test_tau_tau_relation_matches_sequence_definition(a, b, tp, tau):
    rel = TauTauConflict(tp, tau)
    want = oracles.tau_tau_conflict_by_sequences(a, b, tp, tau)
    assert rel(a, b) == want
    assert rel(b, a) == want


@settings(max_examples=200)
@given(color_sets, color_sets, st.integers(1, 4))
def test_tau_relation_is_symmetric_and_correct(a, b, tau):
    rel = TauConflict(tau)
    assert rel(a, b) == rel(b, a) == oracles.tau_conflict_def(a, b, tau)


def test_conflict_degree_of_equality_is_one():
    assert conflict_degree(Equality(), [(1, 2, 3), (2, 3, 4)]) == 1


def test_conflict_degree_counts_the_worst_color():
    rel = PairRelation.from_pairs([(0, 5), (0, 6), (1, 5)])
    assert conflict_degree(rel, [(0, 1), (5, 6)]) == 2


def test_check_solvability_exact_and_log_domain():
    assert check_solvability(13, 2, 3, 2)
    assert not check_solvability(12, 2, 3, 2)
    assert check_solvability(LogValue(math.log(13)), 2, 3, 2)
    assert not check_solvability(LogValue(math.log(12)), 2, 3, 2)
    assert check_solvability(LogValue(1.0), 1, 1, 0)


def test_lemma_example_distinct_types_get_distinct_colors():
    inst = ConflictInstance(Equality(), ((0, 1, 2, 3, 4),), (0, 0, 0), 2)
    table = solve_types(inst)
    assert table == {TypeKey(0, 0): 0, TypeKey(1, 0): 1}
    assert zero_round_solve(inst, [0, 1, 0]) == (0, 1, 0)


def test_precondition_failure_raises():
    inst = ConflictInstance(Equality(), ((0, 1),), (0,), 2)
    with pytest.raises(SolvabilityError, match="does not exceed"):
        solve_types(inst)


def test_restricted_types_weaken_the_precondition():
    inst = ConflictInstance(Equality(), ((0, 1, 2), (1, 2, 3)), (0, 1), 4)
    with pytest.raises(SolvabilityError):
        zero_round_solve(inst, [0, 3])
    assert zero_round_solve(inst, [0, 3], restrict_types=True) == (0, 1)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.lists(st.sets(st.integers(0, 7), min_size=1).map(lambda s: tuple(sorted(s))),
                                   min_size=1, max_size=3, unique=True).map(tuple), st.data())
def test_greedy_output_is_conflict_free_under_precondition(m, family, data):
    pairs = list(itertools.combinations_with_replacement(range(8), 2))
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=6))
    rel = PairRelation.from_pairs(chosen)
    inst = ConflictInstance(rel, family, (), m)
    d = conflict_degree(rel, family)
    if min(map(len, family)) <= m * len(family) * d:
        with pytest.raises(SolvabilityError):
            solve_types(inst)
        return
    table = solve_types(inst)
    assert len(table) == m * len(family)
    assert oracles.conflicting_types(table, rel) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 8), st.data())
def test_lazy_lists_match_materialized_lists(l0, data):
    k = data.draw(st.integers(1, 3))
    tau = data.draw(st.integers(1, k))
    bases = data.draw(st.lists(st.sets(st.integers(0, 11), min_size=l0, max_size=l0).map(lambda s: tuple(sorted(s))),
                               min_size=1, max_size=2, unique=True))
    d = max_tau_overlap_count(l0, k, tau)
    lazy = ConflictInstance(TauConflict(tau), tuple(LazySubsets(b, k) for b in bases), (), 2)
    full = ConflictInstance(TauConflict(tau), tuple(tuple(LazySubsets(b, k)) for b in bases), (), 2)
    if math.comb(l0, k) <= 2 * len(bases) * d:
        return
    assert solve_types(lazy, d) == solve_types(full, d)


@pytest.mark.parametrize("l0, k, tau", [(6, 2, 1), (7, 3, 2), (8, 4, 2), (5, 5, 5)])
def test_overlap_count_matches_brute_force(l0, k, tau):
    base = tuple(range(l0))
    assert max_tau_overlap_count(l0, k, tau) == oracles.max_tau_conflicts(base, base, k, tau)
