from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from listcolor.errors import GraphFormatError
from listcolor.graph_model import (
    ColorSpace,
    ListAssignment,
    OrientedGraph,
    VertexColoring,
    ceil_log2,
    instance_to_dict,
    normalize_lists,
    parse_instance,
    validate_coloring,
)


def cycle4() -> OrientedGraph:
    return OrientedGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)], oriented=True)


def test_ceil_log2_small_values():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_oriented_cycle_degrees():
    g = cycle4()
    assert g.max_degree == 2
    assert g.max_outdegree == 1
    assert g.outneighbors(0) == (1,)
    assert g.inneighbors(0) == (3,)


def test_unoriented_graph_treats_all_neighbors_as_out():
    g = OrientedGraph.from_edges(3, [(0, 1), (1, 2)])
    assert g.outneighbors(1) == (0, 2)
    assert g.max_outdegree == 2


@pytest.mark.parametrize(
    "edges, psi, message",
    [
        ([(0, 0)], None, "self-loop"),
        ([(0, 1), (1, 0)], None, "duplicate"),
        ([(0, 1)], [0, 0], "not proper"),
        ([(0, 5)], None, "outside"),
    ],
)
def test_malformed_graphs_are_rejected(edges, psi, message):
    with pytest.raises(GraphFormatError, match=message):
        OrientedGraph.from_edges(2, edges, psi=psi)


def test_orientation_must_cover_each_edge_once():
    with pytest.raises(GraphFormatError, match="exactly once"):
        OrientedGraph(2, ((1,), (0,)), (0, 1), 2, ((1,), (0,)))


def test_json_round_trip():
    g = cycle4()
    lists = ListAssignment.from_lists([[0, 1, 2], [1, 2, 3], [0, 2, 3], [0, 1, 3]])
    doc = instance_to_dict(g, ColorSpace(4), lists)
    inst = parse_instance(json.dumps(doc))
    assert inst.graph == g
    assert inst.lists == lists
    assert inst.colorspace == ColorSpace(4)


def test_mixed_orientation_is_rejected():
    doc = {"n": 3, "edges": [[0, 1, "->"], [1, 2]]}
    with pytest.raises(GraphFormatError, match="every edge or no edge"):
        parse_instance(json.dumps(doc))


def test_edge_list_format_orients_low_to_high():
    inst = parse_instance("3 3 4\n2 0\n1 2\n")
    assert inst.graph.out == ((2,), (2,), ())
    assert inst.colorspace.size == 4


def test_edge_list_requires_m_at_least_n():
    with pytest.raises(GraphFormatError, match="smaller than n"):
        parse_instance("3 2 4\n0 1\n")


def test_normalize_lists_names_short_vertex():
    lists = ListAssignment.from_lists([[0, 1, 2], [3]])
    with pytest.raises(GraphFormatError, match="vertex 1"):
        normalize_lists(lists, 2)
    assert normalize_lists(ListAssignment.from_lists([[5, 1, 3]]), 2).lists == ((1, 3),)


def test_validate_reports_conflicts_and_list_violations():
    g = OrientedGraph.from_edges(3, [(0, 1), (1, 2)])
    lists = ListAssignment.from_lists([[0], [0, 1], [2]])
    rep = validate_coloring(g, lists, VertexColoring((0, 0, 1)))
    assert rep.conflict_pairs == ((0, 1),)
    assert rep.list_violations == (2,)
    assert not rep.ok


def test_defect_bound_allows_shared_colors():
    g = OrientedGraph.from_edges(3, [(0, 1), (1, 2)])
    assert not validate_coloring(g, None, VertexColoring((0, 0, 0), 1)).ok
    assert validate_coloring(g, None, VertexColoring((0, 0, 1), 1)).ok


def test_partial_coloring_is_ok_but_incomplete():
    g = OrientedGraph.from_edges(2, [(0, 1)])
    rep = validate_coloring(g, None, VertexColoring((0, None)))
    assert rep.ok and not rep.complete


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.data())
def test_induced_subgraph_keeps_edges_between_kept_vertices(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    g = OrientedGraph.from_edges(n, edges, oriented=True)
    keep = data.draw(st.sets(st.integers(0, n - 1)))
    sub, ids = g.induced(keep)
    assert ids == tuple(sorted(keep))
    expected = {(ids.index(u), ids.index(v)) for u, v in edges if u in keep and v in keep}
    got = {(v, u) for v in range(sub.n) for u in sub.out[v]}
    assert got == expected
