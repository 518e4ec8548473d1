"""Exact unweighted distances and successive edge-disjoint shortest paths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import DisconnectedGraphError, GraphError
from .graph import Graph

UNREACHABLE = -1

_NO_EDGES: frozenset = frozenset()


@dataclass(frozen=True)
class DistanceRow:
    source: int
    dist: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.dist[v]


@dataclass(frozen=True)
class PathSeq:
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(a, b) if a < b else (b, a) for a, b in zip(vs, vs[1:])]


@dataclass(frozen=True)
class TShortestResult:
    p1: Optional[PathSeq]
    p2: Optional[PathSeq] = None
    p3: Optional[PathSeq] = None


@dataclass(frozen=True)
class DegreeStats:
    min_degree: int
    distinct_degree_count: int
    degree_sequence: tuple[int, ...]


def _bfs(adj, source: int, removed: AbstractSet = _NO_EDGES, target: int = -1) -> list[int]:
    dist = [UNREACHABLE] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for y in adj[x]:
            if dist[y] == UNREACHABLE:
                if removed and ((x, y) if x < y else (y, x)) in removed:
                    continue
                dist[y] = dx
                if y == target:
                    # every vertex on earlier layers is already labelled
                    return dist
                queue.append(y)
    return dist


def bfs_distances(g: Graph, source: int) -> DistanceRow:
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range")
    return DistanceRow(source, tuple(_bfs(g.adj, source)))


def all_pairs_distances(g: Graph) -> list[DistanceRow]:
    return [bfs_distances(g, s) for s in range(g.n)]


def distance_matrix(g: Graph) -> np.ndarray:
    """Dense n x n int matrix of distances, ``UNREACHABLE`` where infinite."""
    out = np.empty((g.n, g.n), dtype=np.int64)
    for s in range(g.n):
        out[s] = _bfs(g.adj, s)
    return out


def _csr(g: Graph) -> csr_matrix:
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(r) for r in g.adj])
    indices = np.fromiter((v for r in g.adj for v in r), dtype=np.int32, count=2 * g.m)
    return csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(g.n, g.n))


def distance_summary(g: Graph, chunk: int = 512) -> tuple[int, float]:
    """Diameter and mean off-diagonal distance, streamed in source chunks.

    Uses the compiled BFS in scipy so that graphs with tens of thousands of
    vertices fit in memory and finish in reasonable time.
    """
    if g.n == 1:
        return 0, 0.0
    mat = _csr(g)
    dia = 0
    total = 0.0
    for start in range(0, g.n, chunk):
        idx = np.arange(start, min(start + chunk, g.n))
        d = shortest_path(mat, method="D", unweighted=True, directed=False, indices=idx)
        if np.isinf(d).any():
            raise DisconnectedGraphError("diameter undefined on a disconnected graph")
        dia = max(dia, int(d.max()))
        total += float(d.sum())
    return dia, total / (g.n * (g.n - 1))


def diameter(g: Graph) -> int:
    if g.n > 2000:
        return distance_summary(g)[0]
    best = 0
    for s in range(g.n):
        row = _bfs(g.adj, s)
        if UNREACHABLE in row:
            raise DisconnectedGraphError("diameter undefined on a disconnected graph")
        best = max(best, max(row))
    return best


def degree_stats(g: Graph) -> DegreeStats:
    seq = tuple(sorted(len(r) for r in g.adj))
    return DegreeStats(min_degree=seq[0], distinct_degree_count=len(set(seq)), degree_sequence=seq)


def diameter_upper_bound(stats: DegreeStats, n: int, d_actual: int) -> int:
    """Degree-based upper bound on the diameter of a connected graph.

    The additive constant is +1 when the actual diameter is 3 or 4 and -1
    otherwise. Exact rational arithmetic avoids floor errors.
    """
    k = Fraction(1, stats.min_degree + 1)
    shift = 1 if d_actual in (3, 4) else -1
    value = 3 * (n - stats.distinct_degree_count) * k + shift + 3 * k
    return value.numerator // value.denominator


def _trace_back(adj, dist: list[int], u: int, v: int, removed: AbstractSet) -> PathSeq:
    # walk from v to u through the smallest-id predecessor on each layer
    path = [v]
    w = v
    while w != u:
        want = dist[w] - 1
        for p in adj[w]:
            if dist[p] == want and (not removed or ((p, w) if p < w else (w, p)) not in removed):
                w = p
                break
        path.append(w)
    path.reverse()
    return PathSeq(tuple(path))


def shortest_path_avoiding(g: Graph, u: int, v: int, removed: AbstractSet = _NO_EDGES) -> Optional[PathSeq]:
    """Shortest u-v path in ``g`` minus the edges in ``removed`` (``(a, b)`` with a < b)."""
    dist = _bfs(g.adj, u, removed, target=v)
    if dist[v] == UNREACHABLE:
        return None
    return _trace_back(g.adj, dist, u, v, removed)


def t_shortest_paths(g: Graph, u: int, v: int, t_max: int = 3) -> TShortestResult:
    """Successive shortest paths, each avoiding every edge of the earlier ones.

    A missing path leaves that slot (and all later ones) as ``None``.
    """
    if t_max not in (1, 2, 3):
        raise GraphError("t_max must be 1, 2 or 3")
    if u == v:
        raise GraphError("endpoints must differ")
    found: list[Optional[PathSeq]] = []
    removed: set[tuple[int, int]] = set()
    for _ in range(t_max):
        p = shortest_path_avoiding(g, u, v, removed)
        found.append(p)
        if p is None:
            break
        removed.update(p.edges())
    found += [None] * (3 - len(found))
    return TShortestResult(*found)
