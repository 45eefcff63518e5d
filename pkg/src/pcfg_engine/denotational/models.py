from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from pydantic import BaseModel, Field, model_validator

from pcfg_engine.fixpoint_semantics import ConvergenceReport
from pcfg_engine.rational import Rational
from pcfg_engine.store_dist import Store
from pcfg_engine.syntax import Expr, Stmt, While


@dataclass(frozen=True)
class ConstantExpectation:
    value: Fraction


@dataclass(frozen=True)
class ReturnValue:
    """``λs.⟦E⟧s``; negative values are an error unless ``clamp`` is set."""

    expr: Expr
    clamp: bool = False


@dataclass(frozen=True)
class FunctionExpectation:
    """An arbitrary non-negative function of the store."""

    function: Callable[[Store], Fraction]
    name: str = ""


@dataclass(frozen=True)
class Transformed:
    """``⟦stmt⟧ post``."""

    stmt: Stmt
    post: "Expectation"


@dataclass(frozen=True)
class LoopIterate:
    """``F_k`` of a loop: at most ``k`` guard evaluations, 0 beyond."""

    loop: While
    post: "Expectation"
    k: int


@dataclass(frozen=True)
class LoopLimit:
    """``lim F_k``, approximated under the stopping rule."""

    loop: While
    post: "Expectation"


type Expectation = (
    ConstantExpectation
    | ReturnValue
    | FunctionExpectation
    | Transformed
    | LoopIterate
    | LoopLimit
)

ONE = ConstantExpectation(Fraction(1))

type FrontierKey = tuple[While, Expectation, Store]


@dataclass(frozen=True)
class Valuation:
    """An expectation's value at one store.

    ``frontier`` holds the probability with which each ``(loop, post, store)``
    was reached with no iterations left, i.e. where ``F_0 = 0`` was used.
    """

    value: Fraction
    frontier: Mapping[FrontierKey, Fraction] = field(default_factory=dict)

    @property
    def residual(self) -> Fraction:
        return sum(self.frontier.values(), Fraction(0))

    def frontier_delta(self, previous: "Valuation") -> Fraction:
        """Largest change of any frontier probability since ``previous``."""
        keys = {*previous.frontier, *self.frontier}
        return max(
            (
                abs(self.frontier.get(key, Fraction(0)) - previous.frontier.get(key, Fraction(0)))
                for key in keys
            ),
            default=Fraction(0),
        )


def weighted_sum(parts: Iterable[tuple[Fraction, Valuation]]) -> Valuation:
    value = Fraction(0)
    frontier: dict[FrontierKey, Fraction] = {}
    for weight, valuation in parts:
        value += weight * valuation.value
        for key, probability in valuation.frontier.items():
            frontier[key] = frontier.get(key, Fraction(0)) + weight * probability
    return Valuation(value, frontier)


class RawResult(BaseModel):
    """Unnormalized numerator and denominator of a program's semantics."""

    numerator: Rational = Field(..., description="Expected return value, rejected mass counting 0")
    denominator: Rational = Field(..., description="Probability of terminating and accepting")
    converged: bool
    iterations: int = Field(..., ge=0)
    report: ConvergenceReport


class NormalizedResult(BaseModel):
    """Output of `pcfg expect --normalized`."""

    value: Rational = Field(..., description="numerator / denominator")
    numerator: Rational
    denominator: Rational
    converged: bool
    iterations: int = Field(..., ge=0)
    report: ConvergenceReport

    @model_validator(mode="after")
    def validate_value(self) -> "NormalizedResult":
        if self.denominator == 0 or self.value * self.denominator != self.numerator:
            raise ValueError("value must equal numerator / denominator")
        return self
