"""Executable adequacy check between the two semantics, plus a sampling oracle."""

from pcfg_engine.adequacy.adequacy_checker import (
    check_adequacy,
    deterministic_outcome,
    retrieve_expectation,
)
from pcfg_engine.adequacy.models import AdequacyResult, SampleReport, SamplingOptions
from pcfg_engine.adequacy.pcg import Pcg32, splitmix64
from pcfg_engine.adequacy.sampler import draw, sample_program, shard_seed, simulate

__all__ = [
    "AdequacyResult",
    "Pcg32",
    "SampleReport",
    "SamplingOptions",
    "check_adequacy",
    "deterministic_outcome",
    "draw",
    "retrieve_expectation",
    "sample_program",
    "shard_seed",
    "simulate",
    "splitmix64",
]
