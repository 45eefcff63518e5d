from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from pydantic import BaseModel, Field, field_validator, model_validator

from pcfg_engine.rational import Rational
from pcfg_engine.store_dist import Dist, add

DEFAULT_TOLERANCE = Fraction(1, 10**9)


class SemanticsOptions(BaseModel):
    """Stopping rule and cache bound shared by both semantics."""

    tol: Rational = Field(
        DEFAULT_TOLERANCE, description="Positive tolerance on deltas and residual mass"
    )
    max_k: int = Field(10_000, ge=1, description="Iteration budget per limit")
    cache_size: int = Field(2**16, ge=1, description="LRU bound of the omega_k memo")

    @field_validator("tol")
    @classmethod
    def validate_tol(cls, tol: Fraction) -> Fraction:
        if tol <= 0:
            raise ValueError(f"Tolerance must be positive, got {tol}")
        return tol


class ConvergenceReport(BaseModel):
    """How a limit was approximated.

    ``residual_mass`` is the weight that reached the truncation at the last
    iteration. ``certified`` means the residual itself is within tolerance;
    ``exact`` means it is zero and the returned value is the limit.
    Convergence without certification only says that successive iterates
    and their truncation frontiers agree within tolerance.
    """

    iterations_used: int = Field(..., ge=0)
    mass_delta: Rational = Field(..., description="mass(D_k) - mass(D_{k-1})")
    sup_delta: Rational = Field(..., description="Largest pointwise change at the last step")
    residual_mass: Rational = Field(..., description="Weight truncated at the last step")
    tolerance: Rational
    converged: bool
    certified: bool
    exact: bool
    budget_exhausted: bool

    @model_validator(mode="after")
    def validate_state(self) -> "ConvergenceReport":
        if self.converged and self.budget_exhausted:
            raise ValueError("A report cannot be both converged and budget exhausted")
        if self.converged and not (
            self.sup_delta <= self.tolerance or self.residual_mass <= self.tolerance
        ):
            raise ValueError("A converged report needs sup_delta or residual_mass within tolerance")
        if self.certified and not self.converged:
            raise ValueError("Only converged reports can be certified")
        if self.exact and (not self.certified or self.residual_mass != 0):
            raise ValueError("An exact report needs zero residual mass")
        return self

    @classmethod
    def immediate(cls, tolerance: Fraction) -> "ConvergenceReport":
        """The report of a computation that needed no iteration at all."""
        return cls(
            iterations_used=0,
            mass_delta=Fraction(0),
            sup_delta=Fraction(0),
            residual_mass=Fraction(0),
            tolerance=tolerance,
            converged=True,
            certified=True,
            exact=True,
            budget_exhausted=False,
        )


def merge_reports(
    reports: Iterable[ConvergenceReport], tolerance: Fraction
) -> ConvergenceReport:
    """Summarize several limits: the weakest status wins.

    Deltas of exact limits do not measure any distance to the limit and are
    left out of ``sup_delta``.
    """
    reports = list(reports)
    if not reports:
        return ConvergenceReport.immediate(tolerance)
    inexact = [report for report in reports if not report.exact]
    sup_delta = max((report.sup_delta for report in inexact), default=Fraction(0))
    mass_delta = max(
        (report.mass_delta for report in inexact), key=abs, default=Fraction(0)
    )
    return ConvergenceReport(
        iterations_used=max(report.iterations_used for report in reports),
        mass_delta=mass_delta,
        sup_delta=sup_delta,
        residual_mass=max(report.residual_mass for report in reports),
        tolerance=tolerance,
        converged=all(report.converged for report in reports),
        certified=all(report.certified for report in reports),
        exact=all(report.exact for report in reports),
        budget_exhausted=any(report.budget_exhausted for report in reports),
    )


type NodePair = tuple[int, int]


@dataclass(frozen=True)
class Outcome:
    """``ω_k(v, v′)(D)`` together with its truncation frontier.

    ``frontier`` lists, per node pair where the ``ω_0 = 0`` truncation was
    hit, the sub-distribution that was cut off there.
    """

    dist: Dist
    frontier: tuple[tuple[NodePair, Dist], ...] = ()

    @property
    def residual_mass(self) -> Fraction:
        return sum((dist.mass for _, dist in self.frontier), Fraction(0))

    def then(self, later: "Outcome") -> "Outcome":
        """Sequential composition: ``later`` was computed from ``self.dist``."""
        return Outcome(later.dist, merge_frontiers([self.frontier, later.frontier]))


def merge_frontiers(
    frontiers: Iterable[tuple[tuple[NodePair, Dist], ...]],
) -> tuple[tuple[NodePair, Dist], ...]:
    merged: dict[NodePair, Dist] = {}
    for frontier in frontiers:
        for pair, dist in frontier:
            merged[pair] = add(merged[pair], dist) if pair in merged else dist
    return tuple(sorted(merged.items(), key=lambda item: item[0]))


def sup_delta(previous: Dist, current: Dist) -> Fraction:
    """Largest pointwise change over the union of both supports."""
    stores = {*previous.support, *current.support}
    return max((abs(current[store] - previous[store]) for store in stores), default=Fraction(0))


def frontier_delta(
    previous: tuple[tuple[NodePair, Dist], ...], current: tuple[tuple[NodePair, Dist], ...]
) -> Fraction:
    """Largest change of truncated weight at any node pair and store."""
    before, after = dict(previous), dict(current)
    deltas: list[Fraction] = []
    for pair in {*before, *after}:
        if pair in before and pair in after:
            deltas.append(sup_delta(before[pair], after[pair]))
        else:
            only = before[pair] if pair in before else after[pair]
            deltas.append(max(weight for _, weight in only))
    return max(deltas, default=Fraction(0))


def settled(
    delta: Fraction,
    frontier_change: Fraction,
    residual_before: Fraction,
    residual: Fraction,
    tol: Fraction,
) -> bool:
    """Uncertified convergence: iterates and frontiers agree within ``tol``.

    The truncated mass must also have stopped moving relative to its size,
    which rules out geometric tails whose residual shrinks by a fixed ratio.
    """
    return (
        delta <= tol
        and frontier_change <= tol
        and abs(residual - residual_before) <= tol * residual
    )
