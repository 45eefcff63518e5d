"""The pCFG semantics ``ω`` as the limit of its Kleene chain ``ω_k``."""

from pcfg_engine.fixpoint_semantics.models import (
    DEFAULT_TOLERANCE,
    ConvergenceReport,
    NodePair,
    Outcome,
    SemanticsOptions,
    frontier_delta,
    merge_frontiers,
    merge_reports,
    settled,
    sup_delta,
)
from pcfg_engine.fixpoint_semantics.semantics_engine import SemanticsEngine

__all__ = [
    "DEFAULT_TOLERANCE",
    "ConvergenceReport",
    "NodePair",
    "Outcome",
    "SemanticsEngine",
    "SemanticsOptions",
    "frontier_delta",
    "merge_frontiers",
    "merge_reports",
    "settled",
    "sup_delta",
]
