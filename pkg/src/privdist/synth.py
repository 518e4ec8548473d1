"""Graph generators: Harary graphs and small fixtures."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphError
from .graph import Graph


@dataclass(frozen=True)
class HararySpec:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise GraphError("Harary graphs need k >= 2")
        if self.n <= self.k:
            raise GraphError(f"Harary graph H_{{{self.k},{self.n}}} needs n > k")
        if self.k % 2 and self.n % 2:
            raise GraphError("odd k requires even n")

    @property
    def label(self) -> str:
        return f"H_{self.k}_{self.n}"


def harary(spec: HararySpec) -> Graph:
    """Circulant Harary graph: i ~ i±1..i±floor(k/2), plus i ~ i+n/2 for odd k."""
    k, n = spec.k, spec.n
    edges: set[tuple[int, int]] = set()
    for i in range(n):
        for j in range(1, k // 2 + 1):
            a, b = i, (i + j) % n
            edges.add((min(a, b), max(a, b)))
        if k % 2:
            a, b = i, (i + n // 2) % n
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, sorted(edges))


def path_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))
