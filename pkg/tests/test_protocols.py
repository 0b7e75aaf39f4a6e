from __future__ import annotations

import math
import random

import networkx as nx
import pytest

from listcolor import oracles
from listcolor.errors import ParameterError
from listcolor.generators import degree_lists, directed_cycle, greedy_psi, random_graph, random_oriented
from listcolor.graph_model import ListAssignment, OrientedGraph, load_instance
from listcolor.list_framework import Mode, derive_parameters
from listcolor.protocols import (
    defective_color,
    defective_desk_parameters,
    defective_list_color,
    defective_shape,
    iterated_linial,
    linial_fixpoint,
    linial_for_lists,
    linial_reduce,
    lists_desk_parameters,
    low_outdegree_partition,
)
from listcolor.protocols.partition import log_star

DESK = {"tau": 1, "tau_prime": 2, "k": 1, "k_prime": 2, "l0": 6}


def test_linial_reduce_one_round_proper():
    g = random_graph(100, 4, 1)
    res = linial_reduce(g)
    assert res.ok and res.report.complete
    assert res.trace.n_rounds == 1
    assert max(res.coloring.colors) < res.palette_size
    assert res.trace.max_bits == math.ceil(math.log2(g.m))


def test_oriented_reduction_only_avoids_outneighbors():
    g = greedy_psi(random_oriented(40, 2, 3)).with_psi(range(40), 40)
    res = linial_reduce(g, oriented=True)
    assert res.ok and res.info["delta"] == 2


def test_iterated_linial_shrinks_to_fixpoint_region():
    g = random_graph(200, 2, 2).with_psi(range(200), 3000)
    res = iterated_linial(g)
    pal = res.info["palettes"]
    assert len(pal) >= 3 and all(a > b for a, b in zip(pal, pal[1:]))
    assert res.ok and res.trace.n_rounds == len(pal) - 1
    assert res.palette_size <= linial_fixpoint(2)


def test_cycle_fixture_two_rounds_with_formula_bits(fixtures):
    inst = load_instance(fixtures / "cycle4.json")
    params = derive_parameters(1, inst.graph.m, inst.colorspace.size, Mode.DESK, DESK)
    res = linial_for_lists(inst.graph, inst.lists, params, restrict_types=True)
    assert res.ok and res.report.complete
    assert res.trace.n_rounds == 2
    assert [r.max_bits_per_node for r in res.trace.rounds] == [6 * 3 + 2, 1]
    assert all(res.coloring[v] in inst.lists[v] for v in range(4))


def test_messages_go_to_in_neighbors_only():
    g = directed_cycle(4)
    lists = ListAssignment(((0, 1, 2, 3, 4, 5),) * 4)
    res = linial_for_lists(g, lists, derive_parameters(1, 4, 8, Mode.DESK, DESK))
    assert {(s, t) for s, t, _ in res.trace.rounds[0].messages} == {(1, 0), (2, 1), (3, 2), (0, 3)}


def test_outdegree_above_beta_is_rejected():
    g = OrientedGraph.from_edges(3, [(0, 1), (0, 2)], oriented=True)
    lists = ListAssignment(((0, 1, 2, 3, 4, 5),) * 3)
    with pytest.raises(ParameterError, match="outdegree 2"):
        linial_for_lists(g, lists, derive_parameters(1, 3, 8, Mode.DESK, DESK))


def test_residual_arithmetic_is_checked():
    g = directed_cycle(4)
    lists = ListAssignment(((0, 1, 2, 3, 4, 5),) * 4)
    bad = derive_parameters(1, 4, 8, Mode.DESK, {**DESK, "tau_prime": 2, "k_prime": 2, "tau": 1, "k": 1})
    bad2 = derive_parameters(2, 4, 8, Mode.DESK, {"tau": 1, "tau_prime": 2, "k": 1, "k_prime": 2, "l0": 6})
    assert linial_for_lists(g, lists, bad).ok
    with pytest.raises(ParameterError, match="lose every member"):
        linial_for_lists(g, lists, bad2)


def test_random_oriented_graphs_with_auto_parameters():
    for seed in range(5):
        g = greedy_psi(random_oriented(30, 2, seed))
        rng = random.Random(seed)
        pool = [tuple(sorted(rng.sample(range(48), 12))) for _ in range(2)]
        lists = ListAssignment(tuple(pool[rng.randrange(2)] for _ in range(30)))
        types = len(set(zip(g.psi, lists.lists)))
        params = lists_desk_parameters(2, g.m, 48, types, l0_max=12)
        res = linial_for_lists(g, lists, params, restrict_types=True)
        assert res.ok and res.report.complete and res.trace.n_rounds == 2


def test_defective_shape_example():
    assert defective_shape(2, 1, 4) == defective_shape(2, 1, 4)
    shape = defective_shape(2, 1, 4)
    assert (shape.tau, shape.k, shape.l0) == (2, 2, 11)


def small_atlas_graphs():
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() >= 2 and max(dict(h.degree()).values(), default=0) <= 3:
            yield OrientedGraph.from_edges(h.number_of_nodes(), list(h.edges()))


def test_defective_exhaustive_small_graphs():
    checked = 0
    for g in small_atlas_graphs():
        for d in (0, 1, 2):
            res = defective_color(g, d, delta=3)
            counts = oracles.defect_counts(g.adjacency, res.coloring.colors)
            assert max(counts) <= d
            assert res.palette_size == defective_shape(3, d, g.m).l0
            checked += 1
    assert checked == 3 * 252


def test_defective_list_coloring_respects_lists_and_defect():
    for seed in range(4):
        g = greedy_psi(random_graph(40, 3, seed))
        rng = random.Random(seed)
        pool = [tuple(sorted(rng.sample(range(128), 90))) for _ in range(2)]
        lists = ListAssignment(tuple(pool[rng.randrange(2)] for _ in range(40)))
        for d in range(3):
            params = defective_desk_parameters(g.max_degree, d, g.m, 128, 2 * g.m, l0_max=90)
            res = defective_list_color(g, lists, d, params, restrict_types=True)
            assert res.ok and res.report.complete
            assert max(oracles.defect_counts(g.adjacency, res.coloring.colors)) <= d
            assert res.trace.n_rounds == 2


def test_defective_list_needs_large_enough_sublists():
    g = random_graph(20, 3, 0).with_psi(range(20), 20)
    lists = ListAssignment(tuple((tuple(range(40)),) * 20))
    params = derive_parameters(3, 20, 40, Mode.DESK, {"tau": 1, "tau_prime": 1, "k": 1, "k_prime": 1, "l0": 40})
    with pytest.raises(ParameterError, match="ceil"):
        defective_list_color(g, lists, 0, params)


def test_partition_star():
    star = OrientedGraph.from_edges(7, [(0, i) for i in range(1, 7)])
    part = low_outdegree_partition(star, 2)
    assert part.k == 3
    assert all(p.max_outdegree <= 2 for p in part.parts)
    assert part.charged_rounds == 3 + log_star(7)


def test_partition_outdegree_bound_on_many_random_pairs():
    rng = random.Random(2024)
    for trial in range(10_000):
        n = rng.randint(1, 16)
        g = random_graph(n, rng.randint(1, 6), trial)
        beta = rng.randint(1, 4)
        part = low_outdegree_partition(g, beta)
        assert oracles.max_outdegree([o for p in part.parts for o in p.out]) <= beta
        assert sum(p.n for p in part.parts) == n
        assert part.k == max(1, math.ceil(g.max_degree / beta))


def test_log_star():
    assert [log_star(x) for x in (1, 2, 4, 16, 65536, 65537)] == [0, 1, 2, 3, 4, 5]


def test_degree_lists_have_requested_size():
    g = random_graph(30, 5, 1)
    lists = degree_lists(g, 40, 1, slack=2)
    assert all(len(lists[v]) == g.degree(v) + 3 for v in range(30))


def test_defective_zero_defect_at_degree_four():
    g = greedy_psi(random_graph(64, 4, 1))
    res = defective_color(g, 0, delta=4)
    assert res.palette_size == defective_shape(4, 0, g.m).l0
    assert max(oracles.defect_counts(g.adjacency, res.coloring.colors)) == 0


def test_defect_at_least_delta_rejected():
    g = random_graph(20, 3, 0)
    with pytest.raises(ParameterError, match="any single color"):
        defective_color(g, 3, delta=3)
    lists = ListAssignment((tuple(range(6)),) * 20)
    params = derive_parameters(3, g.m, 6, Mode.DESK, {"tau": 1, "tau_prime": 1, "k": 1, "k_prime": 1, "l0": 6})
    with pytest.raises(ParameterError, match="any single color"):
        defective_list_color(g, lists, g.max_degree, params)


def test_edgeless_graph_still_takes_two_rounds():
    g = OrientedGraph.from_edges(3, [], oriented=True)
    lists = ListAssignment(((2, 3, 4, 5, 6, 7), (0, 1, 2, 3, 4, 5), (1, 2, 3, 4, 5, 6)))
    res = linial_for_lists(g, lists, derive_parameters(1, 3, 8, Mode.DESK, DESK), restrict_types=True)
    assert res.coloring.colors == (2, 0, 1) and res.trace.n_rounds == 2
