"""Expectation-transformer semantics of structured programs."""

from pcfg_engine.denotational.expectation_evaluator import (
    ExpectationEvaluator,
    expect,
    loop_iterate,
    normalized_semantics,
    raw_semantics,
    unrolled_while,
)
from pcfg_engine.denotational.models import (
    ONE,
    ConstantExpectation,
    Expectation,
    FunctionExpectation,
    LoopIterate,
    LoopLimit,
    NormalizedResult,
    RawResult,
    ReturnValue,
    Transformed,
    Valuation,
    weighted_sum,
)

__all__ = [
    "ONE",
    "ConstantExpectation",
    "Expectation",
    "ExpectationEvaluator",
    "FunctionExpectation",
    "LoopIterate",
    "LoopLimit",
    "NormalizedResult",
    "RawResult",
    "ReturnValue",
    "Transformed",
    "Valuation",
    "expect",
    "loop_iterate",
    "normalized_semantics",
    "raw_semantics",
    "unrolled_while",
    "weighted_sum",
]
