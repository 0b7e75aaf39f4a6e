"""Seeded synthetic graphs, input colorings and list assignments."""

from __future__ import annotations

import random

from .graph_model import ColorSpace, Instance, ListAssignment, OrientedGraph


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"{tag}/{seed}")


def random_graph(n: int, delta: int, seed: int, p: float | None = None) -> OrientedGraph:
    """G(n, p) with edges visited in shuffled order and dropped once an endpoint has degree delta.

    p defaults to delta / (n - 1), so degrees hover near delta.  psi = IDs.
    """
    rng = _rng(seed, "gnp")
    p = min(1.0, delta / max(1, n - 1)) if p is None else p
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    degree = [0] * n
    edges = []
    for u, v in pairs:
        if degree[u] < delta and degree[v] < delta and rng.random() < p:
            edges.append((u, v))
            degree[u] += 1
            degree[v] += 1
    return OrientedGraph.from_edges(n, sorted(edges))


def directed_cycle(n: int) -> OrientedGraph:
    """Cycle 0 -> 1 -> ... -> n-1 -> 0 (outdegree 1)."""
    return OrientedGraph.from_edges(n, [(v, (v + 1) % n) for v in range(n)], oriented=True)


def directed_path(n: int) -> OrientedGraph:
    return OrientedGraph.from_edges(n, [(v, v + 1) for v in range(n - 1)], oriented=True)


def random_oriented(n: int, beta: int, seed: int) -> OrientedGraph:
    """Each vertex points to up to beta random other vertices (no 2-cycles)."""
    rng = _rng(seed, "oriented")
    taken: set[frozenset[int]] = set()
    edges = []
    for v in range(n):
        others = [u for u in range(n) if u != v]
        rng.shuffle(others)
        want = rng.randint(0, beta)
        for u in others:
            if want == 0:
                break
            key = frozenset((u, v))
            if key not in taken:
                taken.add(key)
                edges.append((v, u))
                want -= 1
    return OrientedGraph.from_edges(n, sorted(edges), oriented=True)


def greedy_psi(graph: OrientedGraph) -> OrientedGraph:
    """Replace psi by the first-fit proper coloring in ID order (at most delta + 1 colors)."""
    colors: list[int] = []
    for v in range(graph.n):
        used = {colors[u] for u in graph.adjacency[v] if u < v}
        colors.append(min(c for c in range(len(used) + 1) if c not in used))
    return graph.with_psi(colors, max(2, max(colors, default=0) + 1))


def list_pool(count: int, size: int, colorspace_size: int, seed: int) -> list[tuple[int, ...]]:
    """``count`` random ``size``-subsets of the colorspace."""
    rng = _rng(seed, "pool")
    return [tuple(sorted(rng.sample(range(colorspace_size), size))) for _ in range(count)]


def lists_from_pool(n: int, pool: list[tuple[int, ...]], seed: int) -> ListAssignment:
    rng = _rng(seed, "pick")
    return ListAssignment(tuple(pool[rng.randrange(len(pool))] for _ in range(n)))


def degree_lists(graph: OrientedGraph, colorspace_size: int, seed: int, slack: int = 0) -> ListAssignment:
    """Random lists of size deg(v) + 1 + slack from {0..|C|-1}."""
    rng = _rng(seed, "deglists")
    out = []
    for v in range(graph.n):
        size = min(colorspace_size, graph.degree(v) + 1 + slack)
        out.append(tuple(sorted(rng.sample(range(colorspace_size), size))))
    return ListAssignment(tuple(out))


PROTOCOLS = ("linial-reduce", "linial-lists", "defective", "defective-list", "deg-plus-one")

# (|C|, list size) defaults; defective list coloring needs sublists of
# ceil(delta/(d+1)) tau colors, so its lists are much longer
DEFAULT_SIZES = {"linial-lists": (64, 16), "defective-list": (256, 160)}


def synthetic_instance(
    protocol: str,
    *,
    n: int,
    seed: int,
    delta: int = 4,
    beta: int = 2,
    colorspace_size: int | None = None,
    slack: int = 12,
    list_size: int | None = None,
    pool: int = 2,
) -> Instance:
    """A seeded random instance shaped for ``protocol``.

    * linial-reduce: degree-capped G(n, p), psi = IDs.
    * defective: degree-capped G(n, p), first-fit psi.
    * linial-lists: random outdegree <= beta orientation, first-fit psi,
      lists drawn from a pool of ``pool`` lists of ``list_size`` colors.
    * defective-list: degree-capped G(n, p), first-fit psi, pooled lists.

    |C| defaults to 64 and ``list_size`` to 12, except 16 for linial-lists
    and 256 and 160 for defective-list.
    * deg-plus-one: degree-capped G(n, p), psi = IDs, lists of deg + 1 + slack.
    """
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}")
    default_colors, default_size = DEFAULT_SIZES.get(protocol, (64, 12))
    colorspace_size = default_colors if colorspace_size is None else colorspace_size
    list_size = default_size if list_size is None else list_size
    cs = ColorSpace(colorspace_size)
    if protocol == "linial-reduce":
        return Instance(random_graph(n, delta, seed), cs, None)
    if protocol == "defective":
        return Instance(greedy_psi(random_graph(n, delta, seed)), cs, None)
    if protocol == "deg-plus-one":
        g = random_graph(n, delta, seed)
        return Instance(g, cs, degree_lists(g, colorspace_size, seed, slack))
    g = random_oriented(n, beta, seed) if protocol == "linial-lists" else random_graph(n, delta, seed)
    g = greedy_psi(g)
    lists = lists_from_pool(n, list_pool(pool, list_size, colorspace_size, seed), seed)
    return Instance(g, cs, lists)
