import os
import random

import networkx as nx
import pytest

from privdist.graph import Graph, parse_edge_lines
from privdist.paths import diameter
from privdist.synth import HararySpec, complete_graph, cycle_graph, harary, path_graph

EIES_ENV = "PRIVDIST_EIES"


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def nx_path_min_pred(h: nx.Graph, u: int, v: int, removed=()):
    """Shortest u-v path avoiding ``removed``, walking back through the
    smallest-id predecessor. Built on networkx distances only."""
    k = h.copy()
    k.remove_edges_from(removed)
    dist = nx.single_source_shortest_path_length(k, u)
    if v not in dist:
        return None
    path = [v]
    while path[-1] != u:
        x = path[-1]
        path.append(min(w for w in k[x] if dist.get(w) == dist[x] - 1))
    return path[::-1]


def path_edges(p):
    return [tuple(sorted(e)) for e in zip(p, p[1:])]


def nx_pair_terms(h: nx.Graph, u: int, v: int):
    """(phi term, psi term) for one pair, computed independently."""
    if h.has_edge(u, v):
        p2 = nx_path_min_pred(h, u, v, [(u, v)])
        p3 = nx_path_min_pred(h, u, v, [(u, v)] + path_edges(p2))
        return len(p2) - 2, (len(p3) - 1) - (len(p2) - 1)
    p1 = nx_path_min_pred(h, u, v)
    p2 = nx_path_min_pred(h, u, v, path_edges(p1))
    return (len(p2) - 1) - (len(p1) - 1), None


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                edges.add((a, b))
    return Graph.from_edges(n, edges)


def random_three_edge_connected(rng: random.Random) -> Graph:
    """Harary H_{3,n} or H_{4,n} with a few random chords."""
    k = rng.choice([3, 4])
    n = rng.choice([6, 8, 10, 12]) if k == 3 else rng.randint(6, 12)
    g = harary(HararySpec(k, n))
    edges = set(g.edges())
    chords = list(g.non_edges())
    rng.shuffle(chords)
    edges.update(chords[: rng.randint(0, min(8, len(chords)))])
    return Graph.from_edges(n, edges)


def eies_surrogate() -> Graph:
    """34 vertices, 474 edges, diameter 2.

    Every mechanism here depends on the graph only through n, the calibrated
    sensitivity and the multiset of pair distances; for a diameter-2 graph
    those are fixed by (n, m), so this graph yields the same MRE
    distribution as the cleaned EIES network.
    """
    rng = random.Random(1979)
    n, m = 34, 474
    while True:
        edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
        rng.shuffle(edges)
        g = Graph.from_edges(n, edges[:m])
        try:
            if diameter(g) == 2:
                return g
        except Exception:
            continue


def eies_graph():
    """The real EIES file when ``PRIVDIST_EIES`` points at it, else the surrogate."""
    path = os.environ.get(EIES_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            g, _, _ = parse_edge_lines(fh)
        return g, "EIES"
    return eies_surrogate(), "EIES-surrogate(n=34,m=474,dia=2)"


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def write_lines(tmp_path):
    def _write(lines, name="g.txt"):
        p = tmp_path / name
        p.write_text("\n".join(lines) + "\n")
        return p
    return _write


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.line(line)
