"""pCFG Engine - exact semantics workbench for probabilistic control-flow graphs."""

from importlib.metadata import version

__version__ = version("pcfg-engine")

# Core Components
from pcfg_engine.denotational import ExpectationEvaluator, normalized_semantics
from pcfg_engine.fixpoint_semantics import SemanticsEngine
from pcfg_engine.graph_analysis import GraphAnalyser
from pcfg_engine.syntax import parse_program
from pcfg_engine.translate import translate_program, translate_stmt

__all__ = [
    "__version__",
    "ExpectationEvaluator",
    "GraphAnalyser",
    "SemanticsEngine",
    "normalized_semantics",
    "parse_program",
    "translate_program",
    "translate_stmt",
]
