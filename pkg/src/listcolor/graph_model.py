"""Graphs, input colorings, color lists and coloring validation.

Instances are read from either a JSON document::

    {"n": 4, "m": 2, "colorspace": 8,
     "edges": [[0, 1, "->"], [1, 2, "->"], [2, 3, "->"], [3, 0, "->"]],
     "psi": [0, 1, 0, 1],
     "lists": [[0, 1, 2, 3, 4, 5], ...]}

or a plain edge list whose first line is ``n m |C|`` followed by one ``u v``
pair per line.  In the plain format the input coloring is the vertex ID and
each edge is oriented from the lower to the higher ID.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import GraphFormatError

Color = int


def ceil_log2(x: int) -> int:
    """Return the smallest b with 2**b >= x (0 for x <= 1)."""
    if x <= 1:
        return 0
    return (x - 1).bit_length()


@dataclass(frozen=True)
class ColorSpace:
    """The totally ordered color set {0, ..., size - 1}."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise GraphFormatError(f"color space must be nonempty, got size {self.size}")

    def __contains__(self, color: object) -> bool:
        return isinstance(color, int) and 0 <= color < self.size

    @property
    def bits(self) -> int:
        return ceil_log2(self.size)


@dataclass(frozen=True)
class OrientedGraph:
    """Undirected simple graph with a proper input coloring and optional orientation.

    ``adjacency[v]`` is the sorted neighbor tuple of ``v``.  When ``out`` is
    given it assigns every edge exactly one direction; otherwise the graph is
    treated as bidirected, so every neighbor is both an in- and an
    outneighbor.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    psi: tuple[int, ...]
    m: int
    out: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adjacency) != self.n:
            raise GraphFormatError("adjacency must have one entry per vertex")
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphFormatError(f"vertex {v} has out-of-range neighbor {u}")
                if u == v:
                    raise GraphFormatError(f"self-loop at vertex {v}")
                if v not in self.adjacency[u]:
                    raise GraphFormatError(f"edge ({v},{u}) is not symmetric")
            if len(set(nbrs)) != len(nbrs):
                raise GraphFormatError(f"duplicate edge at vertex {v}")
        if len(self.psi) != self.n:
            raise GraphFormatError("psi must have one entry per vertex")
        if self.m < 1:
            raise GraphFormatError(f"input coloring size m must be positive, got {self.m}")
        for v, c in enumerate(self.psi):
            if not 0 <= c < self.m:
                raise GraphFormatError(f"psi({v}) = {c} is outside [0, {self.m})")
            for u in self.adjacency[v]:
                if self.psi[u] == c:
                    raise GraphFormatError(
                        f"psi is not proper: vertices {v} and {u} both have input color {c}"
                    )
        if self.out is not None:
            if len(self.out) != self.n:
                raise GraphFormatError("orientation must have one entry per vertex")
            for v in range(self.n):
                for u in self.adjacency[v]:
                    forward = u in self.out[v]
                    backward = v in self.out[u]
                    if forward == backward:
                        raise GraphFormatError(
                            f"orientation must direct edge ({v},{u}) exactly once"
                        )
                if any(u not in self.adjacency[v] for u in self.out[v]):
                    raise GraphFormatError(f"orientation of vertex {v} names a non-edge")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        psi: Sequence[int] | None = None,
        m: int | None = None,
        *,
        oriented: bool = False,
    ) -> OrientedGraph:
        """Build a graph from an edge iterable.

        With ``oriented=True`` each pair ``(u, v)`` is the directed edge u -> v.
        ``psi`` defaults to the vertex IDs and ``m`` to ``max(n, 1)``.
        """
        adj: list[set[int]] = [set() for _ in range(n)]
        outs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) has an endpoint outside [0, {n})")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if v in adj[u]:
                raise GraphFormatError(f"duplicate edge ({u},{v})")
            adj[u].add(v)
            adj[v].add(u)
            outs[u].add(v)
        if psi is None:
            psi = list(range(n))
        if m is None:
            m = max(max(psi, default=0) + 1, n, 1)
        return cls(
            n=n,
            adjacency=tuple(tuple(sorted(a)) for a in adj),
            psi=tuple(psi),
            m=m,
            out=tuple(tuple(sorted(o)) for o in outs) if oriented else None,
        )

    @property
    def oriented(self) -> bool:
        return self.out is not None

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def outneighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v] if self.out is None else self.out[v]

    def inneighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v] if self.out is None else self._in[v]

    @cached_property
    def _in(self) -> tuple[tuple[int, ...], ...]:
        ins: list[list[int]] = [[] for _ in range(self.n)]
        for v in range(self.n):
            for u in self.outneighbors(v):
                ins[u].append(v)
        return tuple(tuple(sorted(i)) for i in ins)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Each undirected edge once as (low, high)."""
        return tuple((v, u) for v in range(self.n) for u in self.adjacency[v] if v < u)

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @cached_property
    def max_outdegree(self) -> int:
        return max((len(self.outneighbors(v)) for v in range(self.n)), default=0)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def induced(self, vertices: Iterable[int]) -> tuple[OrientedGraph, tuple[int, ...]]:
        """Return the induced subgraph relabeled to 0..k-1 and the old IDs.

        Orientation, psi and m carry over unchanged.
        """
        keep = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(keep)}
        adj = tuple(tuple(index[u] for u in self.adjacency[v] if u in index) for v in keep)
        out = None
        if self.out is not None:
            out = tuple(tuple(index[u] for u in self.out[v] if u in index) for v in keep)
        sub = OrientedGraph(
            n=len(keep), adjacency=adj, psi=tuple(self.psi[v] for v in keep), m=self.m, out=out
        )
        return sub, keep

    def with_orientation(self, out: Sequence[Iterable[int]] | None) -> OrientedGraph:
        outs = None if out is None else tuple(tuple(sorted(o)) for o in out)
        return OrientedGraph(self.n, self.adjacency, self.psi, self.m, outs)

    def with_psi(self, psi: Sequence[int], m: int) -> OrientedGraph:
        return OrientedGraph(self.n, self.adjacency, tuple(psi), m, self.out)


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex color lists, each stored as a sorted tuple.

    ``l0`` is set once the lists have been normalized to a common size.
    """

    lists: tuple[tuple[int, ...], ...]
    l0: int | None = None

    def __post_init__(self) -> None:
        for v, lst in enumerate(self.lists):
            if len(set(lst)) != len(lst):
                raise GraphFormatError(f"list of vertex {v} contains a repeated color")
            if list(lst) != sorted(lst):
                raise GraphFormatError(f"list of vertex {v} is not sorted")
            if self.l0 is not None and len(lst) != self.l0:
                raise GraphFormatError(f"list of vertex {v} has size {len(lst)}, expected {self.l0}")

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]]) -> ListAssignment:
        return cls(tuple(tuple(sorted(set(lst))) for lst in lists))

    def __len__(self) -> int:
        return len(self.lists)

    def __getitem__(self, v: int) -> tuple[int, ...]:
        return self.lists[v]

    def check_colorspace(self, colorspace: ColorSpace) -> None:
        for v, lst in enumerate(self.lists):
            for c in lst:
                if c not in colorspace:
                    raise GraphFormatError(
                        f"list of vertex {v} contains color {c} outside [0, {colorspace.size})"
                    )


def normalize_lists(assignment: ListAssignment, l0: int) -> ListAssignment:
    """Truncate every list to its ``l0`` smallest colors.

    Raises:
        GraphFormatError: naming the first vertex whose list is shorter than l0.
    """
    if l0 < 1:
        raise GraphFormatError(f"l0 must be positive, got {l0}")
    out = []
    for v, lst in enumerate(assignment.lists):
        if len(lst) < l0:
            raise GraphFormatError(f"list of vertex {v} has size {len(lst)} < l0 = {l0}")
        out.append(lst[:l0])
    return ListAssignment(tuple(out), l0)


@dataclass(frozen=True)
class Instance:
    """Everything read from an input document."""

    graph: OrientedGraph
    colorspace: ColorSpace | None = None
    lists: ListAssignment | None = None


def _parse_json(doc: dict) -> Instance:
    try:
        n = int(doc["n"])
        edges_raw = doc.get("edges", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"graph document is missing a required field: {exc}") from exc
    directed_flags = []
    edges = []
    for e in edges_raw:
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise GraphFormatError(f"malformed edge entry {e!r}")
        if len(e) == 3 and e[2] != "->":
            raise GraphFormatError(f"unknown edge marker {e[2]!r} in {e!r}")
        directed_flags.append(len(e) == 3)
        edges.append((int(e[0]), int(e[1])))
    if any(directed_flags) and not all(directed_flags):
        raise GraphFormatError("either every edge or no edge may carry an orientation")
    psi = doc.get("psi")
    m = doc.get("m")
    graph = OrientedGraph.from_edges(
        n, edges, psi=psi, m=None if m is None else int(m), oriented=bool(directed_flags) and all(directed_flags)
    )
    colorspace = ColorSpace(int(doc["colorspace"])) if "colorspace" in doc else None
    lists = None
    if doc.get("lists") is not None:
        if len(doc["lists"]) != n:
            raise GraphFormatError("lists must have one entry per vertex")
        lists = ListAssignment.from_lists(doc["lists"])
        if colorspace is not None:
            lists.check_colorspace(colorspace)
    return Instance(graph, colorspace, lists)


def _parse_edge_list(text: str) -> Instance:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows or len(rows[0]) != 3:
        raise GraphFormatError("edge-list header must be 'n m |C|'")
    try:
        n, m, csize = (int(x) for x in rows[0])
        pairs = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphFormatError(f"edge list contains a non-integer or malformed row: {exc}") from exc
    if m < n:
        raise GraphFormatError(f"m = {m} is smaller than n = {n}, but psi defaults to vertex IDs")
    edges = [(min(a, b), max(a, b)) for a, b in pairs]
    graph = OrientedGraph.from_edges(n, edges, m=m, oriented=True)
    return Instance(graph, ColorSpace(csize), None)


def parse_instance(text: str) -> Instance:
    """Parse either input format from a string."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from exc
        return _parse_json(doc)
    return _parse_edge_list(text)


def load_instance(source: str | Path) -> Instance:
    return parse_instance(Path(source).read_text())


def load_graph(source: str | Path) -> OrientedGraph:
    return load_instance(source).graph


def instance_to_dict(graph: OrientedGraph, colorspace: ColorSpace | None = None,
                     lists: ListAssignment | None = None) -> dict:
    """Inverse of the JSON input format."""
    doc: dict = {"n": graph.n, "m": graph.m}
    if colorspace is not None:
        doc["colorspace"] = colorspace.size
    if graph.out is None:
        doc["edges"] = [[u, v] for u, v in graph.edges]
    else:
        doc["edges"] = [[v, u, "->"] for v in range(graph.n) for u in graph.out[v]]
    doc["psi"] = list(graph.psi)
    if lists is not None:
        doc["lists"] = [list(lst) for lst in lists.lists]
    return doc


@dataclass(frozen=True)
class VertexColoring:
    """A partial coloring; ``None`` marks an uncolored vertex."""

    colors: tuple[int | None, ...]
    defect_bound: int = 0

    def __getitem__(self, v: int) -> int | None:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    @property
    def palette(self) -> set[int]:
        return {c for c in self.colors if c is not None}


@dataclass(frozen=True)
class ValidationReport:
    """Violations found by :func:`validate_coloring`; empty means valid."""

    defect_violations: tuple[tuple[int, int], ...] = ()
    conflict_pairs: tuple[tuple[int, int], ...] = ()
    list_violations: tuple[int, ...] = ()
    uncolored: tuple[int, ...] = field(default=(), compare=False)

    @property
    def ok(self) -> bool:
        return not (self.defect_violations or self.list_violations)

    @property
    def complete(self) -> bool:
        return not self.uncolored

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "complete": self.complete,
            "defectViolations": [list(p) for p in self.defect_violations],
            "conflictPairs": [list(p) for p in self.conflict_pairs],
            "listViolations": list(self.list_violations),
            "uncolored": list(self.uncolored),
        }


def validate_coloring(
    graph: OrientedGraph,
    lists: ListAssignment | None,
    coloring: VertexColoring,
) -> ValidationReport:
    """Check defect and list constraints of a (partial) coloring.

    A colored vertex violates the defect bound d when more than d of its
    colored neighbors share its color.  Monochromatic edges touching such a
    vertex are reported as conflict pairs.
    """
    if len(coloring) != graph.n:
        raise GraphFormatError("coloring must have one entry per vertex")
    d = coloring.defect_bound
    bad: list[tuple[int, int]] = []
    bad_set = set()
    for v in range(graph.n):
        c = coloring[v]
        if c is None:
            continue
        same = sum(1 for u in graph.adjacency[v] if coloring[u] == c)
        if same > d:
            bad.append((v, same))
            bad_set.add(v)
    pairs = tuple(
        (u, v)
        for u, v in graph.edges
        if coloring[u] is not None and coloring[u] == coloring[v] and (u in bad_set or v in bad_set)
    )
    list_bad: tuple[int, ...] = ()
    if lists is not None:
        list_bad = tuple(
            v for v in range(graph.n) if coloring[v] is not None and coloring[v] not in lists[v]
        )
    uncolored = tuple(v for v in range(graph.n) if coloring[v] is None)
    return ValidationReport(tuple(bad), pairs, list_bad, uncolored)
