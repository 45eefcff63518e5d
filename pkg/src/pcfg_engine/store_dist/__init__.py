"""Stores, finite-support distributions and the one-step operators."""

from pcfg_engine.store_dist.models import (
    Concentration,
    Dist,
    DistDocument,
    DistEntryDocument,
    Store,
)
from pcfg_engine.store_dist.operations import (
    add,
    add_all,
    apply_assign,
    apply_rassign,
    dump_dist,
    is_concentrated,
    load_dist,
    mass,
    pair,
    scale,
    select,
)

__all__ = [
    "Concentration",
    "Dist",
    "DistDocument",
    "DistEntryDocument",
    "Store",
    "add",
    "add_all",
    "apply_assign",
    "apply_rassign",
    "dump_dist",
    "is_concentrated",
    "load_dist",
    "mass",
    "pair",
    "scale",
    "select",
]
