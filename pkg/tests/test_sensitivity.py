import math
import random

import pytest

from conftest import nx_pair_terms, random_three_edge_connected, to_nx
from privdist.errors import AbsentPathError, BridgeError, DisconnectedGraphError
from privdist.graph import Graph
from privdist.sensitivity import (
    NeighborOp,
    add_edge_smooth_sensitivity,
    brute_force_ias,
    brute_force_smooth_sensitivity,
    clear_cache,
    pair_terms,
    remove_edge_smooth_sensitivity,
    remove_edge_terms,
    smooth_from_terms,
    smooth_sensitivity,
)
from privdist.synth import HararySpec, complete_graph, cycle_graph, harary, path_graph


def test_add_edge_examples(p5):
    assert add_edge_smooth_sensitivity(complete_graph(5)).ias == 1
    r = add_edge_smooth_sensitivity(p5, beta=0.3)
    assert r.ias == 3 and r.ss == 3.0
    assert r.op is NeighborOp.ADD_EDGE


def test_add_edge_brute_force_examples(p5):
    assert brute_force_ias(p5, NeighborOp.ADD_EDGE) == 3
    assert brute_force_ias(complete_graph(4), NeighborOp.ADD_EDGE) == 1


def test_remove_edge_complete_graph(k4):
    r = remove_edge_smooth_sensitivity(k4, beta=0.5)
    assert (r.phi, r.psi, r.ss) == (1.0, 0.0, 1.0)
    assert r.pairs_scanned == 6
    assert brute_force_ias(k4, NeighborOp.REMOVE_EDGE) == 1


def test_remove_edge_cycle_has_no_third_path(c6):
    with pytest.raises(AbsentPathError) as info:
        remove_edge_smooth_sensitivity(c6, beta=0.1)
    assert info.value.code == "E_ABSENT_PATH"
    assert len(info.value.pairs) == 6
    assert all(t == 3 for _, _, t in info.value.pairs)


def test_brute_force_remove_on_cycle_and_bridge():
    assert brute_force_ias(cycle_graph(5), NeighborOp.REMOVE_EDGE) == 3
    with pytest.raises(BridgeError):
        brute_force_ias(path_graph(3), NeighborOp.REMOVE_EDGE)


def test_disconnected_rejected():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError):
        add_edge_smooth_sensitivity(g)
    with pytest.raises(DisconnectedGraphError):
        remove_edge_terms(g)


def test_smooth_from_terms():
    assert smooth_from_terms(0, 0, 1.0) == 1.0
    assert smooth_from_terms(2, 5, 0.0) == 5.0
    assert smooth_from_terms(2, 5, 1.0) == pytest.approx(max(2, 5 / math.e))


def test_pair_terms_match_networkx_oracle():
    rng = random.Random(8)
    for _ in range(15):
        g = random_three_edge_connected(rng)
        h = to_nx(g)
        terms = remove_edge_terms(g, keep_contributions=True)
        for (u, v), got in terms.contributions.items():
            assert got == nx_pair_terms(h, u, v)
            assert pair_terms(g, u, v) == got
        assert terms.phi == max(a for a, _ in terms.contributions.values())
        assert terms.psi == max((b for _, b in terms.contributions.values() if b is not None), default=0)


def test_harary_remove_terms_positive():
    r = remove_edge_smooth_sensitivity(harary(HararySpec(3, 10)), beta=0.2)
    assert r.phi >= 1 and r.psi >= 0
    assert r.ss >= r.phi


def test_brute_smooth_includes_own_sensitivity(p5):
    beta = 0.4
    got = brute_force_smooth_sensitivity(p5, NeighborOp.ADD_EDGE, beta)
    assert got == 3.0  # neighbors only shrink under adding


def test_dispatch_and_report_format(k4):
    r = smooth_sensitivity(k4, NeighborOp.REMOVE_EDGE, 0.25)
    kv = dict(line.split("=") for line in r.to_kv().splitlines())
    assert kv["phi"] == "1" and kv["psi"] == "0" and kv["ss"] == "1"
    assert r.csv_header().split(",")[0] == "op"
    assert r.to_csv_row().startswith("remove,")
    assert NeighborOp.parse("ADD") is NeighborOp.ADD_EDGE


def test_cache_reused_and_cleared(monkeypatch):
    import privdist.sensitivity as sens

    g = harary(HararySpec(4, 9))
    calls = []
    real = sens.remove_edge_terms
    monkeypatch.setattr(sens, "remove_edge_terms", lambda *a, **k: calls.append(1) or real(*a, **k))
    clear_cache()
    a = sens.remove_edge_smooth_sensitivity(g, 0.1)
    b = sens.remove_edge_smooth_sensitivity(g, 0.9)
    assert len(calls) == 1
    assert a.phi == b.phi and a.beta != b.beta
    clear_cache()
    sens.remove_edge_smooth_sensitivity(g, 0.1)
    assert len(calls) == 2
