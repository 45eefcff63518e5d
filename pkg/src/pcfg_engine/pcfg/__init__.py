"""Probabilistic control-flow graphs: labels, validation, export and rewriting."""

from pcfg_engine.pcfg.models import (
    AssignLabel,
    BranchLabel,
    NodeLabel,
    NoLabel,
    ObserveLabel,
    Pcfg,
    RandomAssignLabel,
    ReturnLabel,
    SkipLabel,
    Violation,
    ViolationKind,
)
from pcfg_engine.pcfg.serialization import (
    EdgeDocument,
    NodeDocument,
    PcfgDocument,
    dump_pcfg,
    load_pcfg,
)
from pcfg_engine.pcfg.transforms import (
    canonical_form,
    compress_skips,
    embed,
    is_isomorphic,
    label_text,
    require_valid,
    to_dot,
)
from pcfg_engine.pcfg.validation import is_deterministic, label_variables, validate

__all__ = [
    "AssignLabel",
    "BranchLabel",
    "EdgeDocument",
    "NoLabel",
    "NodeDocument",
    "NodeLabel",
    "ObserveLabel",
    "Pcfg",
    "PcfgDocument",
    "RandomAssignLabel",
    "ReturnLabel",
    "SkipLabel",
    "Violation",
    "ViolationKind",
    "canonical_form",
    "compress_skips",
    "dump_pcfg",
    "embed",
    "is_deterministic",
    "is_isomorphic",
    "label_text",
    "label_variables",
    "load_pcfg",
    "require_valid",
    "to_dot",
    "validate",
]
