from __future__ import annotations

import pytest

from listcolor.errors import GraphFormatError, ParameterError
from listcolor.generators import degree_lists, random_graph
from listcolor.graph_model import ColorSpace, ListAssignment, OrientedGraph
from listcolor.protocols import deg_plus_one_list_color
from listcolor.protocols.pipeline import phase_count


def test_phase_count():
    assert [phase_count(d) for d in (1, 2, 4, 8, 16, 256)] == [0, 0, 1, 2, 3, 6]


def run_example(seed: int = 0, n: int = 64, delta: int = 8):
    g = random_graph(n, delta, seed)
    lists = degree_lists(g, 64, seed, slack=12)
    return g, deg_plus_one_list_color(g, lists, ColorSpace(64), x_override=delta / 2)


def test_degree_halves_every_phase():
    g, res = run_example()
    assert res.ok and res.report.complete
    phases = res.info["phases"]
    assert res.info["t"] == phase_count(g.max_degree)
    assert 1 <= len(phases) <= res.info["t"]
    for j, ph in enumerate(phases, 1):
        assert 2 * ph["deltaAfter"] <= ph["deltaBefore"]
        assert ph["deltaAfter"] * 2**j <= g.max_degree
        assert len(ph["stages"]) == ph["parts"]


def test_stage_rounds_are_accounted():
    _, res = run_example(seed=3)
    stages = sum(len(ph["stages"]) for ph in res.info["phases"])
    assert res.trace.n_rounds >= 3 * stages
    assert res.info["totalRounds"] == res.trace.n_rounds


def test_many_seeds():
    for seed in range(5):
        _, res = run_example(seed, n=48, delta=6)
        assert res.ok and res.report.complete


def test_disjoint_lists():
    g = random_graph(24, 3, 1)
    lists = ListAssignment(tuple(tuple(range(16 * v, 16 * v + 16)) for v in range(24)))
    res = deg_plus_one_list_color(g, lists, ColorSpace(16 * 24), x_override=1.5)
    assert res.ok and res.report.complete
    assert all(res.coloring[v] in lists[v] for v in range(24))


def test_small_slack_skips_phases():
    g = random_graph(40, 4, 2)
    lists = degree_lists(g, 32, 2, slack=0)
    res = deg_plus_one_list_color(g, lists, ColorSpace(32), x_override=2)
    assert res.ok and res.report.complete
    assert res.info["t"] == 0 and "fallback" in res.info
    assert res.info["finalPhase"]["vertices"] == 40


def test_formula_for_x_needs_override_at_small_degree():
    g = random_graph(40, 4, 2)
    lists = degree_lists(g, 64, 2, slack=12)
    with pytest.raises(ParameterError, match="X override"):
        deg_plus_one_list_color(g, lists, ColorSpace(64))


def test_short_list_rejected():
    g = OrientedGraph.from_edges(3, [(0, 1), (1, 2)])
    lists = ListAssignment(((0, 1), (0, 1), (0, 1)))
    with pytest.raises(GraphFormatError, match="vertex 1"):
        deg_plus_one_list_color(g, lists, ColorSpace(2))


def test_edgeless_graph_takes_one_final_round():
    g = OrientedGraph.from_edges(5, [])
    lists = ListAssignment(((3,),) * 5)
    res = deg_plus_one_list_color(g, lists, ColorSpace(4))
    assert res.coloring.colors == (3,) * 5


def test_order_seed_does_not_change_output():
    g = random_graph(40, 6, 4)
    lists = degree_lists(g, 64, 4, slack=12)
    a = deg_plus_one_list_color(g, lists, ColorSpace(64), x_override=3)
    b = deg_plus_one_list_color(g, lists, ColorSpace(64), x_override=3, order_seed=11)
    assert a.coloring == b.coloring and a.trace.n_rounds == b.trace.n_rounds
