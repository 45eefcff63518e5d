from fractions import Fraction

from pydantic import BaseModel, Field, model_validator

from pcfg_engine.adequacy.pcg import MASK64
from pcfg_engine.fixpoint_semantics import ConvergenceReport
from pcfg_engine.rational import Rational
from pcfg_engine.store_dist import DistDocument


class AdequacyResult(BaseModel):
    """Both sides of ``Σ_s F(s)·D(s) = Σ_s F′(s)·D′(s)`` for one statement."""

    lhs: Rational = Field(..., description="Σ F(s)·D(s), F = ⟦S⟧F′ evaluated denotationally")
    rhs: Rational = Field(..., description="Σ F′(s)·D′(s), D′ = ω(Start, End)(D)")
    abs_diff: Rational
    slack: Rational = Field(..., description="Allowed |lhs - rhs|; 0 when both sides are exact")
    exact: bool = Field(..., description="Both sides are exact, so equality is required")
    both_converged: bool
    passed: bool
    operational: ConvergenceReport
    denotational: ConvergenceReport

    @model_validator(mode="after")
    def validate_diff(self) -> "AdequacyResult":
        if self.abs_diff != abs(self.lhs - self.rhs):
            raise ValueError("abs_diff must equal |lhs - rhs|")
        if self.exact and self.slack != 0:
            raise ValueError("An exact comparison allows no slack")
        return self


class SamplingOptions(BaseModel):
    n: int = Field(100_000, ge=1, description="Number of simulated runs")
    seed: int = Field(0, ge=0, le=MASK64, description="64-bit generator seed")
    step_bound: int = Field(
        100_000, ge=1, description="Steps after which a run counts as nonterminating"
    )
    shards: int = Field(1, ge=1, description="Independent sub-streams the runs are split into")
    workers: int = Field(1, ge=1, description="Processes running the shards")

    @model_validator(mode="after")
    def validate_shards(self) -> "SamplingOptions":
        if self.shards > self.n:
            raise ValueError(f"Cannot split {self.n} runs into {self.shards} shards")
        return self


class SampleReport(BaseModel):
    """Rejection-sampling estimate of a program's semantics."""

    n_total: int = Field(..., ge=1)
    n_accepted: int = Field(..., ge=0)
    n_rejected_observe: int = Field(..., ge=0)
    n_step_bound_hit: int = Field(..., ge=0)
    empirical_end_dist: DistDocument = Field(
        ..., description="Accepted end stores, weighted by count / n_total"
    )
    empirical_normalized_expectation: Rational | None = Field(
        None, description="Mean return value over accepted runs"
    )
    expectation_defined: bool
    acceptance_rate: Rational
    seed: int = Field(..., ge=0, le=MASK64)

    @model_validator(mode="after")
    def validate_counts(self) -> "SampleReport":
        if self.n_total != self.n_accepted + self.n_rejected_observe + self.n_step_bound_hit:
            raise ValueError("Run counts do not add up to n_total")
        if self.expectation_defined != (self.n_accepted > 0) or self.expectation_defined != (
            self.empirical_normalized_expectation is not None
        ):
            raise ValueError("The expectation is defined exactly when some run was accepted")
        mass = sum((entry.weight for entry in self.empirical_end_dist.entries), Fraction(0))
        if mass != Fraction(self.n_accepted, self.n_total):
            raise ValueError("Empirical end distribution must have mass n_accepted / n_total")
        if self.acceptance_rate != Fraction(self.n_accepted, self.n_total):
            raise ValueError("acceptance_rate must equal n_accepted / n_total")
        return self
