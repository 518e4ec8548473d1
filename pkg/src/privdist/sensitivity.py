"""Individual asymmetric and smooth sensitivity of the distance query.

Two neighbor operations are supported: adding one edge (distances can only
shrink) and removing one edge (distances can only grow). The fast routines
follow the diameter and successive-shortest-path characterisations; the
``brute_force_*`` functions enumerate neighbors explicitly and serve as
oracles on small graphs.
"""

from __future__ import annotations

import enum
import math
import weakref
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import AbsentPathError, BridgeError, GraphError
from .graph import Graph, require_connected, with_edge_added, with_edge_removed
from .paths import UNREACHABLE, _bfs, _trace_back, diameter, distance_matrix, shortest_path_avoiding


class NeighborOp(enum.Enum):
    ADD_EDGE = "add"
    REMOVE_EDGE = "remove"

    @classmethod
    def parse(cls, text: str) -> "NeighborOp":
        try:
            return cls(text.lower())
        except ValueError:
            raise GraphError(f"unknown neighbor op {text!r}; expected 'add' or 'remove'") from None


# Zero sensitivity would publish the exact answer.
MIN_SENSITIVITY = 1


@dataclass
class SensitivityReport:
    op: NeighborOp
    ias: float
    beta: float
    ss: float
    phi: Optional[float] = None
    psi: Optional[float] = None
    pairs_scanned: int = 0
    absent_path_pairs: list = field(default_factory=list)
    # (u, v) -> (phi term, psi term or None); only kept on request
    contributions: Optional[dict] = None

    def as_dict(self) -> dict:
        return {
            "op": self.op.value,
            "ias": self.ias,
            "phi": self.phi,
            "psi": self.psi,
            "beta": self.beta,
            "ss": self.ss,
            "pairs_scanned": self.pairs_scanned,
            "absent_path_pairs": len(self.absent_path_pairs),
        }

    def to_kv(self) -> str:
        return "\n".join(f"{k}={_fmt(v)}" for k, v in self.as_dict().items())

    def csv_header(self) -> str:
        return ",".join(self.as_dict())

    def to_csv_row(self) -> str:
        return ",".join(_fmt(v) for v in self.as_dict().values())


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


# -- add-edge neighborhood ---------------------------------------------------

def add_edge_ias(g: Graph) -> int:
    require_connected(g)
    if g.n < 2:
        raise GraphError("sensitivity needs at least two vertices")
    dia = _cached(g, "diameter", lambda: diameter(g))
    return max(dia - 1, MIN_SENSITIVITY)


def add_edge_smooth_sensitivity(g: Graph, beta: float = 0.0) -> SensitivityReport:
    """Adding an edge never lengthens a path, so every neighbor's sensitivity
    is at most ours and the smooth bound collapses to ``diameter - 1``."""
    ias = add_edge_ias(g)
    return SensitivityReport(op=NeighborOp.ADD_EDGE, ias=ias, beta=beta, ss=float(ias),
                             pairs_scanned=g.n * (g.n - 1) // 2)


# -- remove-edge neighborhood ------------------------------------------------

@dataclass(frozen=True)
class RemoveEdgeTerms:
    phi: int
    psi: int
    pairs_scanned: int
    contributions: Optional[dict] = None

    def smooth(self, beta: float) -> float:
        return smooth_from_terms(self.phi, self.psi, beta)


def smooth_from_terms(phi: float, psi: float, beta: float) -> float:
    return max(float(max(phi, MIN_SENSITIVITY)), math.exp(-beta) * psi)


def pair_terms(g: Graph, u: int, v: int) -> tuple[Optional[int], Optional[int]]:
    """Contribution of one unordered pair to the phi and psi maxima.

    Adjacent pairs yield ``(|P2| - 1, |P3| - |P2|)`` computed without the
    edge itself; other pairs yield ``(|P2| - |P1|, None)``. A missing path
    is reported as ``None`` in the affected slot.
    """
    if g.has_edge(u, v):
        removed = {(u, v) if u < v else (v, u)}
        p2 = shortest_path_avoiding(g, u, v, removed)
        if p2 is None:
            return None, None
        removed.update(p2.edges())
        p3 = shortest_path_avoiding(g, u, v, removed)
        return p2.length - 1, (None if p3 is None else p3.length - p2.length)
    p1 = shortest_path_avoiding(g, u, v)
    if p1 is None:
        return None, None
    p2 = shortest_path_avoiding(g, u, v, set(p1.edges()))
    return (None if p2 is None else p2.length - p1.length), None


def remove_edge_terms(g: Graph, keep_contributions: bool = False) -> RemoveEdgeTerms:
    """Scan every unordered pair once and collect the phi/psi maxima.

    Raises :class:`AbsentPathError` listing every pair whose required path
    is missing instead of letting an infinite term through.
    """
    require_connected(g)
    if g.n < 2:
        raise GraphError("sensitivity needs at least two vertices")
    adj = g.adj
    phi = psi = 0
    absent = []
    contrib = {} if keep_contributions else None
    scanned = 0
    for u in range(g.n):
        # one BFS gives P1 for every non-adjacent partner of u
        dist_u = _bfs(adj, u)
        nbrs = set(adj[u])
        for v in range(u + 1, g.n):
            scanned += 1
            if v in nbrs:
                removed = {(u, v)}
                p2 = shortest_path_avoiding(g, u, v, removed)
                if p2 is None:
                    absent.append((u, v, 2))
                    continue
                removed.update(p2.edges())
                p3 = shortest_path_avoiding(g, u, v, removed)
                if p3 is None:
                    absent.append((u, v, 3))
                    continue
                a, b = p2.length - 1, p3.length - p2.length
                if b > psi:
                    psi = b
            else:
                p1 = _trace_back(adj, dist_u, u, v, ())
                p2 = shortest_path_avoiding(g, u, v, set(p1.edges()))
                if p2 is None:
                    absent.append((u, v, 2))
                    continue
                a, b = p2.length - p1.length, None
            if a > phi:
                phi = a
            if contrib is not None:
                contrib[(u, v)] = (a, b)
    if absent:
        raise AbsentPathError(absent)
    return RemoveEdgeTerms(phi=phi, psi=psi, pairs_scanned=scanned, contributions=contrib)


def remove_edge_smooth_sensitivity(g: Graph, beta: float, keep_contributions: bool = False) -> SensitivityReport:
    if keep_contributions:
        terms = remove_edge_terms(g, keep_contributions=True)
    else:
        terms = _cached(g, "remove_terms", lambda: remove_edge_terms(g))
    ias = max(terms.phi, MIN_SENSITIVITY)
    return SensitivityReport(
        op=NeighborOp.REMOVE_EDGE,
        ias=float(ias),
        phi=float(terms.phi),
        psi=float(terms.psi),
        beta=beta,
        ss=terms.smooth(beta),
        pairs_scanned=terms.pairs_scanned,
        contributions=terms.contributions,
    )


def smooth_sensitivity(g: Graph, op: NeighborOp, beta: float) -> SensitivityReport:
    if op is NeighborOp.ADD_EDGE:
        return add_edge_smooth_sensitivity(g, beta)
    return remove_edge_smooth_sensitivity(g, beta)


# -- per-graph cache ---------------------------------------------------------

_CACHE: "weakref.WeakKeyDictionary[Graph, dict]" = weakref.WeakKeyDictionary()


def _cached(g: Graph, key: str, compute):
    slot = _CACHE.setdefault(g, {})
    if key not in slot:
        slot[key] = compute()
    return slot[key]


def clear_cache() -> None:
    _CACHE.clear()


# -- brute-force oracles -------------------------------------------------------

def _pair_change(base: np.ndarray, other: np.ndarray) -> int:
    return int(np.abs(base - other).max())


def brute_force_ias(g: Graph, op: NeighborOp) -> int:
    """Local sensitivity by enumerating every neighbor graph explicitly."""
    base = distance_matrix(g)
    if (base == UNREACHABLE).any():
        raise GraphError("oracle needs a connected graph")
    best = 0
    if op is NeighborOp.ADD_EDGE:
        for s, t in g.non_edges():
            best = max(best, _pair_change(base, distance_matrix(with_edge_added(g, s, t))))
    else:
        for s, t in g.edges():
            d = distance_matrix(with_edge_removed(g, s, t))
            if (d == UNREACHABLE).any():
                raise BridgeError((s, t))
            best = max(best, _pair_change(base, d))
    return max(best, MIN_SENSITIVITY)


def brute_force_smooth_sensitivity(g: Graph, op: NeighborOp, beta: float) -> float:
    """Smooth sensitivity restricted to neighbors at distance one."""
    if op is NeighborOp.ADD_EDGE:
        neighbors = (with_edge_added(g, s, t) for s, t in g.non_edges())
    else:
        neighbors = (with_edge_removed(g, s, t) for s, t in g.edges())
    far = max((brute_force_ias(h, op) for h in neighbors), default=0)
    return max(float(brute_force_ias(g, op)), math.exp(-beta) * far)
