"""Differentially private shortest-path distance queries on unweighted graphs."""

from .graph import Graph, load_edge_list, largest_component, is_connected, edge_connectivity
from .mechanisms import MechanismKind, QueryAnswer, answer, answer_add, answer_remove, answer_all_pairs
from .noise import PrivacyParams, ScaleRule, default_delta, derive_params, make_rng
from .sensitivity import NeighborOp, SensitivityReport, smooth_sensitivity
from .synth import HararySpec, harary

__version__ = "0.1.0"
