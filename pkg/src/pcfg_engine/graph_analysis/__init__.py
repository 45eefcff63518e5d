"""Postdominators, first proper postdominators, longest acyclic paths and
cycle-inducing nodes of a pCFG."""

from pcfg_engine.graph_analysis.graph_analyser import (
    GraphAnalyser,
    cycle_inducing,
    fppd,
    lap,
    postdominators,
    postdominators_brute_force,
    prec,
    simple_cycles,
)
from pcfg_engine.graph_analysis.models import (
    AnalysisOptions,
    AnalysisReport,
    GraphAnalysis,
    LapReport,
    NodeReport,
    PdRelation,
)

__all__ = [
    "AnalysisOptions",
    "AnalysisReport",
    "GraphAnalyser",
    "GraphAnalysis",
    "LapReport",
    "NodeReport",
    "PdRelation",
    "cycle_inducing",
    "fppd",
    "lap",
    "postdominators",
    "postdominators_brute_force",
    "prec",
    "simple_cycles",
]
