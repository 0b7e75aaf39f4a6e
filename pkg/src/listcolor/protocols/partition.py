"""Partition of a graph into parts of small outdegree.

This is a centralized stand-in for a distributed partition routine.
Vertices are taken in ID order; each joins the class holding the fewest of
its already-placed neighbors (lowest class index on ties), and every
intra-class edge is directed from the later vertex to the earlier one.  A
vertex's outdegree within its class is then its number of earlier neighbors
there, at most floor(deg / k) <= beta for k = ceil(delta / beta) classes.
The round cost the distributed routine would incur is reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..graph_model import OrientedGraph


def log_star(x: float) -> int:
    count = 0
    while x > 1:
        x = math.log2(x)
        count += 1
    return count


@dataclass(frozen=True)
class PartitionResult:
    """Class index per vertex and, per class, the oriented induced subgraph."""

    beta: int
    classes: tuple[int, ...]
    parts: tuple[OrientedGraph, ...]
    members: tuple[tuple[int, ...], ...]
    charged_rounds: int

    @property
    def k(self) -> int:
        return len(self.parts)


def low_outdegree_partition(graph: OrientedGraph, beta: int, delta: int | None = None) -> PartitionResult:
    """Split ``graph`` into ceil(delta/beta) parts, each oriented with outdegree <= beta.

    ``delta`` defaults to the maximum degree.  The charged round count is
    k + log* m.
    """
    if beta < 1:
        raise ValueError(f"beta must be at least 1, got {beta}")
    delta = graph.max_degree if delta is None else delta
    k = max(1, math.ceil(delta / beta))
    cls = [-1] * graph.n
    for v in range(graph.n):
        load = [0] * k
        for u in graph.adjacency[v]:
            if cls[u] >= 0:
                load[cls[u]] += 1
        cls[v] = min(range(k), key=lambda i: (load[i], i))
    parts = []
    members = []
    for i in range(k):
        keep = [v for v in range(graph.n) if cls[v] == i]
        sub, ids = graph.induced(keep)
        pos = {v: j for j, v in enumerate(ids)}
        out = [[pos[u] for u in graph.adjacency[v] if cls[u] == i and u < v] for v in ids]
        parts.append(sub.with_orientation(out))
        members.append(ids)
    oriented = tuple(parts)
    for part in oriented:
        if part.max_outdegree > beta:
            raise AssertionError(f"partition produced outdegree {part.max_outdegree} > beta = {beta}")
    return PartitionResult(beta, tuple(cls), oriented, tuple(members), k + log_star(graph.m))
