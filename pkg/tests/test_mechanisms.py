import math

import numpy as np
import pytest

from conftest import eies_surrogate
from privdist.errors import DisconnectedGraphError, GraphError
from privdist.graph import Graph
from privdist.mechanisms import (
    LN2,
    MechanismKind,
    answer,
    answer_adp,
    answer_add,
    answer_all_pairs,
    answer_remove,
    answer_sdp,
    answers_to_csv,
    draw_unit_noise,
    noise_scale,
    noisy_all_pairs,
    raw_values,
    repeated_answers,
    sensitivity_for,
)
from privdist.noise import ScaleRule, derive_params, make_rng
from privdist.sensitivity import NeighborOp
from privdist.synth import complete_graph, path_graph

ADD, REMOVE = NeighborOp.ADD_EDGE, NeighborOp.REMOVE_EDGE
IADP, ADP, SDP = MechanismKind.IADP, MechanismKind.ADP, MechanismKind.SDP


def frequency(values, x):
    return float(np.mean(np.asarray(values) == x))


def test_injected_add_example(p5):
    params = derive_params(2.0, 0.01, ScaleRule.ALPHA)
    scale = noise_scale(IADP, 3.0, params)
    assert scale == 3.0
    assert raw_values(2, 0.4, scale, IADP, ADD) == pytest.approx(1.1205584583, abs=1e-9)
    rng = make_rng(0)
    outs = [answer_add(p5, 0, 2, params, rng, noise=0.4).noisy_distance for _ in range(40000)]
    assert set(outs) == {1, 2}
    assert frequency(outs, 2) == pytest.approx(0.1205584583, abs=0.01)


def test_injected_remove_example(k4):
    params = derive_params(2.0, 0.01, ScaleRule.ALPHA)
    assert raw_values(1, -0.3, 1.0, IADP, REMOVE) == pytest.approx(1.3931471806, abs=1e-9)
    rng = make_rng(1)
    outs = [answer_remove(k4, 0, 1, params, rng, noise=-0.3).noisy_distance for _ in range(40000)]
    assert set(outs) == {1, 2}
    assert frequency(outs, 2) == pytest.approx(0.3931471806, abs=0.01)


def test_median_cancellation(k4):
    k5 = complete_graph(5)
    rng = make_rng(2)
    big = derive_params(50.0, 0.01)
    for _ in range(50):
        assert answer_add(k5, 0, 3, big, rng, noise=LN2).noisy_distance == 1
        assert answer_remove(k4, 1, 2, big, rng, noise=-LN2).noisy_distance == 1
        assert answer_adp(k5, 0, 3, big, rng, ADD, noise=LN2).noisy_distance == 1


def test_clamps(p5):
    params = derive_params(1.0, 0.01)
    rng = make_rng(3)
    # huge positive noise under add is capped at n - 1
    assert answer_add(p5, 0, 1, params, rng, noise=50.0).noisy_distance == 4
    # huge negative noise under remove is floored at 1
    assert answer_remove(complete_graph(4), 0, 1, params, rng, noise=-50.0).noisy_distance == 1
    low = answer_add(p5, 0, 1, params, rng, noise=0.0).noisy_distance
    assert low <= 0
    assert answer_add(p5, 0, 1, params, rng, noise=0.0, clamp_lower=True).noisy_distance == 1


def test_baseline_scales():
    g = eies_surrogate()
    p1 = derive_params(1.0, 1 / 340)
    assert sensitivity_for(g, SDP, ADD, p1) == 33.0
    assert noise_scale(SDP, 33.0, p1) == 33.0
    p8 = derive_params(8.0, 1 / 340, ScaleRule.ALPHA)
    assert noise_scale(ADP, sensitivity_for(g, ADP, ADD, p8), p8) == 8.25
    assert noise_scale(ADP, 33.0, derive_params(8.0, 1 / 340)) == 4.125
    assert sensitivity_for(g, IADP, ADD, p8) == 1.0


def test_all_pairs_shape_and_public_fields(tmp_path):
    g = path_graph(3)
    params = derive_params(1.0, 0.01)
    answers = answer_all_pairs(g, IADP, ADD, params, make_rng(4), seed=4)
    assert [(a.u, a.v) for a in answers] == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
    assert all(a.noisy_distance <= 2 for a in answers)
    fields = answers[0].public_fields()
    assert len(fields) == 8 and fields[3] == "iadp"
    out = tmp_path / "a.csv"
    answers_to_csv(answers, out)
    lines = out.read_text().splitlines()
    assert lines[0].startswith("u,v,noisy_distance") and "true" not in lines[0]
    assert len(lines) == 7


def test_determinism(k4):
    params = derive_params(1.0, 0.01)
    a = [answer_sdp(k4, 0, 1, params, make_rng(9), ADD).noisy_distance for _ in range(3)]
    assert len(set(a)) == 1
    t1, n1, _ = noisy_all_pairs(k4, IADP, REMOVE, params, make_rng(9))
    t2, n2, _ = noisy_all_pairs(k4, IADP, REMOVE, params, make_rng(9))
    assert (n1 == n2).all() and (t1 == t2).all()


def test_one_sided_support():
    rng = make_rng(10)
    scale = 2.5
    z_add = draw_unit_noise(rng, IADP, ADD, size=100000)
    z_rem = draw_unit_noise(rng, IADP, REMOVE, size=100000)
    assert (raw_values(3, z_add, scale, IADP, ADD) - 3 >= -scale * LN2 - 1e-12).all()
    assert (raw_values(3, z_rem, scale, IADP, REMOVE) - 3 <= scale * LN2 + 1e-12).all()


@pytest.mark.parametrize("op", [ADD, REMOVE])
def test_median_of_raw_error_is_zero(op):
    z = draw_unit_noise(make_rng(11), IADP, op, size=1_000_000)
    assert float(np.median(raw_values(5, z, 1.0, IADP, op) - 5)) == pytest.approx(0.0, abs=0.01)


def test_repeated_answers_and_override(k4):
    params = derive_params(1.0, 0.01)
    out = repeated_answers(k4, 0, 1, IADP, REMOVE, params, make_rng(12), 1000, sensitivity=2.0)
    assert out.shape == (1000,) and (out >= 1).all()


def test_argument_errors(k4):
    params = derive_params(1.0, 0.01)
    rng = make_rng(0)
    with pytest.raises(GraphError):
        answer(k4, 0, 0, IADP, ADD, params, rng)
    with pytest.raises(GraphError):
        answer(k4, 0, 9, IADP, ADD, params, rng)
    with pytest.raises(DisconnectedGraphError):
        answer(Graph.from_edges(3, [(0, 1)]), 0, 1, IADP, ADD, params, rng)
    assert MechanismKind.parse("SDP") is SDP
