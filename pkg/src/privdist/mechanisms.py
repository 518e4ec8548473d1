"""Private distance answers.

``IADP`` calibrates one-sided exponential noise to the smooth sensitivity of
the actual graph: positive noise for the add-edge neighborhood, negative
noise for the remove-edge one, re-centred on the median ``scale * ln 2``.
``ADP`` is the same mechanism calibrated to the global bound ``n - 1`` and
``SDP`` adds two-sided Laplace noise at ``(n - 1) / epsilon``. Every answer
is random-rounded and clamped to the feasible side for the neighbor op.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GraphError, ParameterError
from .graph import Graph, require_connected
from .noise import PrivacyParams, random_round, standard_exponential, standard_laplace
from .paths import bfs_distances, distance_matrix
from .sensitivity import NeighborOp, smooth_sensitivity

LN2 = math.log(2)


class MechanismKind(enum.Enum):
    IADP = "iadp"
    ADP = "adp"
    SDP = "sdp"

    @classmethod
    def parse(cls, text: str) -> "MechanismKind":
        try:
            return cls(text.lower())
        except ValueError:
            raise ParameterError(f"unknown mechanism {text!r}; expected iadp, adp or sdp") from None


@dataclass(frozen=True)
class QueryAnswer:
    u: int
    v: int
    true_distance: int
    noisy_distance: int
    sensitivity_used: float
    mechanism: MechanismKind
    op: NeighborOp
    params: PrivacyParams
    seed: Optional[int] = None

    def public_fields(self) -> list:
        """The published columns; ``true_distance`` is deliberately absent."""
        return [self.u, self.v, self.noisy_distance, self.mechanism.value, self.op.value,
                format(self.params.epsilon, ".10g"), format(self.params.delta, ".10g"),
                "" if self.seed is None else self.seed]

    def line(self) -> str:
        return " ".join(str(x) for x in self.public_fields())


CSV_COLUMNS = ["u", "v", "noisy_distance", "mechanism", "op", "epsilon", "delta", "seed", "sensitivity_used"]


def answers_to_csv(answers, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for a in answers:
            row = a.public_fields() + [format(a.sensitivity_used, ".10g")]
            fh.write(",".join(str(x) for x in row) + "\n")


# -- calibration -------------------------------------------------------------------

def sensitivity_for(g: Graph, mechanism: MechanismKind, op: NeighborOp, params: PrivacyParams) -> float:
    if mechanism is MechanismKind.IADP:
        return smooth_sensitivity(g, op, params.beta).ss
    return float(g.n - 1)


def noise_scale(mechanism: MechanismKind, sensitivity: float, params: PrivacyParams) -> float:
    if mechanism is MechanismKind.SDP:
        return sensitivity / params.epsilon
    return params.noise_scale(sensitivity)


def draw_unit_noise(rng: np.random.Generator, mechanism: MechanismKind, op: NeighborOp, size=None):
    """Unit-scale noise: Laplace for SDP, else Exp+ (add) or Exp- (remove)."""
    if mechanism is MechanismKind.SDP:
        return standard_laplace(rng, size)
    e = standard_exponential(rng, size)
    return e if op is NeighborOp.ADD_EDGE else -e


def raw_values(true, unit_noise, scale: float, mechanism: MechanismKind, op: NeighborOp):
    """Noisy value before rounding; one-sided noise is shifted by its median."""
    raw = true + scale * unit_noise
    if mechanism is MechanismKind.SDP:
        return raw
    if op is NeighborOp.ADD_EDGE:
        return raw - scale * LN2
    return raw + scale * LN2


def postprocess(raw, n: int, op: NeighborOp, rng: np.random.Generator, clamp_lower: bool = False):
    """Random rounding, then clamp: add caps at ``n - 1``, remove floors at 1.

    ``clamp_lower`` additionally floors add-edge answers at 1.
    """
    out = random_round(rng, raw)
    if op is NeighborOp.ADD_EDGE:
        out = np.minimum(out, n - 1)
        if clamp_lower:
            out = np.maximum(out, 1)
    else:
        out = np.maximum(out, 1)
    return int(out) if np.ndim(out) == 0 else out


# -- single queries ----------------------------------------------------------------

def answer(g: Graph, u: int, v: int, mechanism: MechanismKind, op: NeighborOp,
           params: PrivacyParams, rng: np.random.Generator, *,
           sensitivity: Optional[float] = None, noise: Optional[float] = None,
           clamp_lower: bool = False, seed: Optional[int] = None) -> QueryAnswer:
    """Answer one distance query.

    ``sensitivity`` overrides the calibration, e.g. to evaluate a neighbor
    graph with the noise fixed by the actual graph. ``noise`` injects the
    unit-scale draw instead of sampling it; rounding still uses ``rng``.
    """
    require_connected(g)
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise GraphError(f"vertex pair ({u},{v}) out of range for n={g.n}")
    if u == v:
        raise GraphError("query endpoints must differ")
    if sensitivity is None:
        sensitivity = sensitivity_for(g, mechanism, op, params)
    scale = noise_scale(mechanism, sensitivity, params)
    true = bfs_distances(g, u)[v]
    z = draw_unit_noise(rng, mechanism, op) if noise is None else noise
    raw = raw_values(true, z, scale, mechanism, op)
    noisy = postprocess(raw, g.n, op, rng, clamp_lower)
    return QueryAnswer(u, v, true, noisy, sensitivity, mechanism, op, params, seed)


def answer_add(g, u, v, params, rng, **kw) -> QueryAnswer:
    """Positive-noise answer under the add-edge neighborhood."""
    return answer(g, u, v, MechanismKind.IADP, NeighborOp.ADD_EDGE, params, rng, **kw)


def answer_remove(g, u, v, params, rng, **kw) -> QueryAnswer:
    """Negative-noise answer under the remove-edge neighborhood."""
    return answer(g, u, v, MechanismKind.IADP, NeighborOp.REMOVE_EDGE, params, rng, **kw)


def answer_sdp(g, u, v, params, rng, op: NeighborOp, **kw) -> QueryAnswer:
    return answer(g, u, v, MechanismKind.SDP, op, params, rng, **kw)


def answer_adp(g, u, v, params, rng, op: NeighborOp, **kw) -> QueryAnswer:
    return answer(g, u, v, MechanismKind.ADP, op, params, rng, **kw)


# -- batches -------------------------------------------------------------------

def ordered_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``(u, v)`` with ``u != v`` in row-major order."""
    uu, vv = np.divmod(np.arange(n * n), n)
    keep = uu != vv
    return uu[keep], vv[keep]


def noisy_all_pairs(g: Graph, mechanism: MechanismKind, op: NeighborOp, params: PrivacyParams,
                    rng: np.random.Generator, *, dist: Optional[np.ndarray] = None,
                    sensitivity: Optional[float] = None, clamp_lower: bool = False):
    """Vectorised answers for every ordered pair.

    Returns ``(true, noisy, sensitivity)`` where the arrays follow
    :func:`ordered_pairs`. One noise draw per pair, all from ``rng``.
    """
    require_connected(g)
    if g.n < 2:
        raise GraphError("need at least two vertices")
    if sensitivity is None:
        sensitivity = sensitivity_for(g, mechanism, op, params)
    if dist is None:
        dist = distance_matrix(g)
    uu, vv = ordered_pairs(g.n)
    true = dist[uu, vv]
    scale = noise_scale(mechanism, sensitivity, params)
    z = draw_unit_noise(rng, mechanism, op, size=true.shape)
    raw = raw_values(true, z, scale, mechanism, op)
    return true, postprocess(raw, g.n, op, rng, clamp_lower), sensitivity


def answer_all_pairs(g: Graph, mechanism: MechanismKind, op: NeighborOp, params: PrivacyParams,
                     rng: np.random.Generator, *, sensitivity: Optional[float] = None,
                     clamp_lower: bool = False, seed: Optional[int] = None) -> list[QueryAnswer]:
    true, noisy, sens = noisy_all_pairs(g, mechanism, op, params, rng,
                                        sensitivity=sensitivity, clamp_lower=clamp_lower)
    uu, vv = ordered_pairs(g.n)
    return [QueryAnswer(int(a), int(b), int(t), int(x), sens, mechanism, op, params, seed)
            for a, b, t, x in zip(uu, vv, true, noisy)]


def repeated_answers(g: Graph, u: int, v: int, mechanism: MechanismKind, op: NeighborOp,
                     params: PrivacyParams, rng: np.random.Generator, size: int, *,
                     sensitivity: Optional[float] = None, clamp_lower: bool = False) -> np.ndarray:
    """``size`` independent noisy answers for one pair (Monte-Carlo helper)."""
    require_connected(g)
    if u == v:
        raise GraphError("query endpoints must differ")
    if sensitivity is None:
        sensitivity = sensitivity_for(g, mechanism, op, params)
    scale = noise_scale(mechanism, sensitivity, params)
    true = bfs_distances(g, u)[v]
    raw = raw_values(true, draw_unit_noise(rng, mechanism, op, size=size), scale, mechanism, op)
    return postprocess(raw, g.n, op, rng, clamp_lower)
