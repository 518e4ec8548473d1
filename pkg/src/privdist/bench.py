"""Epsilon sweeps over mechanisms with all-pair mean relative error."""

from __future__ import annotations

import csv
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ParameterError, PrivDistError
from .graph import Graph, load_edge_list, require_connected
from .mechanisms import MechanismKind, QueryAnswer, noisy_all_pairs, sensitivity_for
from .noise import ScaleRule, default_delta, derive_params, derive_seed
from .paths import distance_matrix
from .sensitivity import NeighborOp
from .synth import HararySpec, harary

log = logging.getLogger(__name__)

CSV_FIELDS = ["dataset", "mechanism", "op", "epsilon", "delta", "rep", "seed", "mre", "wall_ms"]

# stream ids stay fixed whatever order the caller lists mechanisms in
_MECH_STREAM = {MechanismKind.IADP: 0, MechanismKind.ADP: 1, MechanismKind.SDP: 2}


@dataclass
class ExperimentConfig:
    op: NeighborOp
    epsilon_values: Sequence[float]
    mechanisms: Sequence[MechanismKind] = (MechanismKind.IADP, MechanismKind.ADP, MechanismKind.SDP)
    graph_path: Optional[str] = None
    harary: Optional[HararySpec] = None
    dataset: Optional[str] = None
    delta: Optional[float] = None
    repetitions: int = 20
    master_seed: int = 0
    output: Optional[str] = None
    largest_component: bool = False
    scale_rule: ScaleRule = ScaleRule.EPSILON
    clamp_lower: bool = False

    def __post_init__(self):
        eps = list(self.epsilon_values)
        if not eps:
            raise ParameterError("epsilon list is empty")
        if any(b <= a for a, b in zip(eps, eps[1:])):
            raise ParameterError("epsilon values must be strictly ascending")
        if self.repetitions < 1:
            raise ParameterError("repetitions must be >= 1")
        if not self.mechanisms:
            raise ParameterError("no mechanisms selected")
        self.epsilon_values = eps

    @property
    def label(self) -> str:
        if self.dataset:
            return self.dataset
        if self.harary is not None:
            return self.harary.label
        if self.graph_path:
            return os.path.splitext(os.path.basename(self.graph_path))[0]
        return "graph"

    def load_graph(self) -> Graph:
        if self.harary is not None:
            return harary(self.harary)
        if self.graph_path is None:
            raise ParameterError("config names neither a graph file nor a Harary spec")
        return load_edge_list(self.graph_path, largest=self.largest_component)[0]


@dataclass(frozen=True)
class ExperimentRecord:
    dataset: str
    mechanism: str
    op: str
    epsilon: float
    delta: float
    rep: int
    seed: int
    mre: float
    wall_ms: int = field(default=0, compare=False)


def mre_from_arrays(true: np.ndarray, noisy: np.ndarray) -> float:
    true = np.asarray(true, dtype=float)
    noisy = np.asarray(noisy, dtype=float)
    if true.shape != noisy.shape:
        raise ParameterError(f"shape mismatch: {true.shape} vs {noisy.shape}")
    if (true <= 0).any():
        raise ParameterError("true off-diagonal distances must be >= 1")
    return float(np.mean(np.abs(noisy - true) / true))


def mre(true_distances: np.ndarray, answers: Sequence[QueryAnswer]) -> float:
    """Mean of ``|noisy - true| / true`` over all ``n^2 - n`` ordered pairs."""
    d = np.asarray(true_distances)
    n = d.shape[0]
    if n < 2:
        raise ParameterError("need n >= 2")
    if len(answers) != n * n - n:
        raise ParameterError(f"expected {n * n - n} answers, got {len(answers)}")
    seen = set()
    true = np.empty(len(answers))
    noisy = np.empty(len(answers))
    for i, a in enumerate(answers):
        if a.u == a.v or (a.u, a.v) in seen:
            raise ParameterError(f"answers do not cover each ordered pair once: ({a.u},{a.v})")
        seen.add((a.u, a.v))
        true[i] = d[a.u, a.v]
        noisy[i] = a.noisy_distance
    return mre_from_arrays(true, noisy)


def run_experiment(config: ExperimentConfig, graph: Optional[Graph] = None) -> list[ExperimentRecord]:
    g = config.load_graph() if graph is None else graph
    require_connected(g)
    delta = config.delta if config.delta is not None else default_delta(g.n)
    dist = distance_matrix(g)
    label = config.label
    records = []
    for mech in config.mechanisms:
        for ei, eps in enumerate(config.epsilon_values):
            params = derive_params(eps, delta, config.scale_rule)
            try:
                # remove-edge terms are cached per graph; only beta changes with eps
                sens = sensitivity_for(g, mech, config.op, params)
            except PrivDistError:
                log.error("calibration failed for dataset=%s mechanism=%s op=%s eps=%g",
                          label, mech.value, config.op.value, eps)
                raise
            for rep in range(config.repetitions):
                seed = derive_seed(config.master_seed, _MECH_STREAM[mech], ei, rep)
                rng = np.random.default_rng(seed)
                t0 = time.perf_counter()
                true, noisy, _ = noisy_all_pairs(g, mech, config.op, params, rng, dist=dist,
                                                 sensitivity=sens, clamp_lower=config.clamp_lower)
                value = mre_from_arrays(true, noisy)
                wall = int(round((time.perf_counter() - t0) * 1000))
                records.append(ExperimentRecord(label, mech.value, config.op.value, eps, delta,
                                                rep, seed, value, wall))
            log.info("%s %s eps=%g sens=%g mean_mre=%.4f", label, mech.value, eps, sens,
                     np.mean([r.mre for r in records[-config.repetitions:]]))
    if config.output:
        write_csv(records, config.output)
    return records


def _g(x: float) -> str:
    # shortest repr that reads back to the same float
    return repr(float(x))


def write_csv(records: Sequence[ExperimentRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in records:
            w.writerow([r.dataset, r.mechanism, r.op, _g(r.epsilon), _g(r.delta), r.rep, r.seed,
                        _g(r.mre), r.wall_ms])


def read_csv(path) -> list[ExperimentRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [ExperimentRecord(r["dataset"], r["mechanism"], r["op"], float(r["epsilon"]),
                             float(r["delta"]), int(r["rep"]), int(r["seed"]), float(r["mre"]),
                             int(r["wall_ms"])) for r in rows]


@dataclass(frozen=True)
class SweepPoint:
    mechanism: str
    epsilon: float
    mean: float
    std: float
    reps: int


def summarize(records: Sequence[ExperimentRecord]) -> list[SweepPoint]:
    """Mean and sample standard deviation of MRE per (mechanism, epsilon)."""
    groups: dict[tuple[str, float], list[float]] = {}
    for r in records:
        groups.setdefault((r.mechanism, r.epsilon), []).append(r.mre)
    out = []
    for (mech, eps), vals in groups.items():
        arr = np.asarray(vals)
        std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
        out.append(SweepPoint(mech, eps, float(arr.mean()), std, len(arr)))
    return out


def count_inversions(values: Sequence[float]) -> int:
    """Adjacent pairs where the sequence fails to decrease."""
    return sum(1 for a, b in zip(values, values[1:]) if b >= a)
