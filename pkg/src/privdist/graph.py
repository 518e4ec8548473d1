"""Immutable simple undirected graphs, edge-list ingestion and connectivity."""

from __future__ import annotations

import os
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DisconnectedGraphError, EdgeListError, GraphError


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected unweighted graph on vertices ``0..n-1``.

    Neighbor lists are sorted ascending; BFS tie-breaking elsewhere in the
    package relies on that order. Instances are never mutated after
    construction, so they can be shared freely and used as cache keys.
    """

    __slots__ = ("n", "adj", "m", "_hash", "__weakref__")

    def __init__(self, n: int, adjacency: Sequence[Iterable[int]]):
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        if len(adjacency) != n:
            raise GraphError(f"adjacency has {len(adjacency)} rows, expected {n}")
        adj = tuple(tuple(sorted(row)) for row in adjacency)
        total = 0
        for u, row in enumerate(adj):
            for i, v in enumerate(row):
                if not 0 <= v < n:
                    raise GraphError(f"vertex {v} out of range")
                if v == u:
                    raise GraphError(f"self-loop at {u}")
                if i and row[i - 1] == v:
                    raise GraphError(f"duplicate edge ({u},{v})")
            total += len(row)
        for u, row in enumerate(adj):
            for v in row:
                if not _contains(adj[v], u):
                    raise GraphError(f"asymmetric adjacency: {v} in adj({u}) but not vice versa")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "m", total // 2)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if v in rows[u]:
                raise GraphError(f"duplicate edge ({u},{v})")
            rows[u].add(v)
            rows[v].add(u)
        return cls(n, rows)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.n, self.adj)))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def edges(self) -> Iterator[tuple[int, int]]:
        """Unordered edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u, row in enumerate(self.adj):
            for v in row:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        return _contains(self.adj[u], v)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def non_edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            row = set(self.adj[u])
            for v in range(u + 1, self.n):
                if v not in row:
                    yield (u, v)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


def _contains(row: tuple[int, ...], v: int) -> bool:
    i = bisect_left(row, v)
    return i < len(row) and row[i] == v


@dataclass(frozen=True)
class CleanReport:
    raw_vertices: int
    raw_edges: int
    dropped_self_loops: int
    dropped_duplicates: int
    dropped_isolated: int
    components_found: int
    kept_component_size: int


def parse_edge_lines(lines: Iterable[str], largest: bool = False) -> tuple[Graph, CleanReport, list[str]]:
    """Clean an edge list into a simple graph.

    Returns the graph, the cleaning report and the original label of every
    dense vertex id. Tokens beyond the first two on a line are ignored.
    """
    order: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    kept: list[tuple[int, int]] = []
    raw_edges = loops = dups = 0
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) < 2:
            raise EdgeListError(f"line {lineno}: expected two endpoints, got {text!r}")
        a, b = parts[0], parts[1]
        raw_edges += 1
        ia = order.setdefault(a, len(order))
        ib = order.setdefault(b, len(order))
        if ia == ib:
            loops += 1
            continue
        k = _key(ia, ib)
        if k in seen:
            dups += 1
            continue
        seen.add(k)
        kept.append((ia, ib))

    raw_vertices = len(order)
    touched = sorted({x for e in kept for x in e})
    if not touched:
        raise EdgeListError("graph is empty after cleaning")
    # raw ids were handed out in first-appearance order, so sorting preserves it
    relabel = {old: new for new, old in enumerate(touched)}
    labels_by_raw = list(order)
    labels = [labels_by_raw[old] for old in touched]
    g = Graph.from_edges(len(touched), ((relabel[a], relabel[b]) for a, b in kept))
    comps = components(g)
    if largest:
        g, keep = _largest(g, comps)
        labels = [labels[i] for i in keep]
    report = CleanReport(
        raw_vertices=raw_vertices,
        raw_edges=raw_edges,
        dropped_self_loops=loops,
        dropped_duplicates=dups,
        dropped_isolated=raw_vertices - len(touched),
        components_found=len(comps),
        kept_component_size=g.n,
    )
    return g, report, labels


def load_edge_list(path: str | os.PathLike, largest: bool = False) -> tuple[Graph, CleanReport]:
    """Read a whitespace-separated edge list; see :func:`parse_edge_lines`."""
    g, report, _ = load_labeled_edge_list(path, largest)
    return g, report


def load_labeled_edge_list(path: str | os.PathLike, largest: bool = False) -> tuple[Graph, CleanReport, list[str]]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_edge_lines(fh, largest=largest)
    except OSError as exc:
        raise EdgeListError(f"cannot read {path}: {exc.strerror or exc}") from exc


def write_edge_list(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        out.append(sorted(comp))
    return out


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Graph:
    keep = sorted(vertices)
    index = {v: i for i, v in enumerate(keep)}
    rows = [[index[y] for y in g.adj[x] if y in index] for x in keep]
    return Graph(len(keep), rows)


def _largest(g: Graph, comps: list[list[int]]) -> tuple[Graph, list[int]]:
    # comps is ordered by smallest member, so max() keeps the first on ties
    best = max(comps, key=len)
    if len(best) == g.n:
        return g, best
    return induced_subgraph(g, best), best


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component (ties: smallest member id)."""
    return _largest(g, components(g))[0]


def is_connected(g: Graph) -> bool:
    seen = [False] * g.n
    seen[0] = True
    count = 1
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                queue.append(y)
    return count == g.n


def with_edge_added(g: Graph, u: int, v: int) -> Graph:
    _check_pair(g, u, v)
    if g.has_edge(u, v):
        raise GraphError(f"edge ({u},{v}) already present")
    rows = [list(r) for r in g.adj]
    rows[u].append(v)
    rows[v].append(u)
    return Graph(g.n, rows)


def with_edge_removed(g: Graph, u: int, v: int) -> Graph:
    _check_pair(g, u, v)
    if not g.has_edge(u, v):
        raise GraphError(f"edge ({u},{v}) not present")
    rows = [list(r) for r in g.adj]
    rows[u].remove(v)
    rows[v].remove(u)
    return Graph(g.n, rows)


def _check_pair(g: Graph, u: int, v: int) -> None:
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise GraphError(f"vertex pair ({u},{v}) out of range for n={g.n}")
    if u == v:
        raise GraphError("endpoints must differ")


def _max_flow_unit(g: Graph, s: int, t: int, limit: int) -> int:
    """Edge-disjoint s-t path count on the undirected graph, capped at ``limit``."""
    flow: dict[tuple[int, int], int] = {}
    total = 0
    while total < limit:
        parent = {s: s}
        queue = deque([s])
        while queue and t not in parent:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in parent and flow.get((x, y), 0) < 1:
                    parent[y] = x
                    queue.append(y)
        if t not in parent:
            break
        y = t
        while y != s:
            x = parent[y]
            flow[(x, y)] = flow.get((x, y), 0) + 1
            flow[(y, x)] = flow.get((y, x), 0) - 1
            y = x
        total += 1
    return total


def edge_connectivity(g: Graph) -> int:
    """Exact edge connectivity via unit-capacity max-flow.

    Any minimum cut separates vertex 0 from some other vertex, so the
    minimum over ``t`` of the 0-t max-flow is the global value.
    """
    if g.n < 2:
        raise GraphError("edge connectivity needs at least two vertices")
    if not is_connected(g):
        return 0
    best = min(g.degree(x) for x in range(g.n))
    for t in range(1, g.n):
        best = min(best, _max_flow_unit(g, 0, t, best))
        if best == 1:
            break
    return best


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError(f"graph with n={g.n} is not connected")
