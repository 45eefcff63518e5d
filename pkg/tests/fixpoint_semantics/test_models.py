from fractions import Fraction

import pytest
from pydantic import ValidationError

from pcfg_engine.fixpoint_semantics import (
    DEFAULT_TOLERANCE,
    ConvergenceReport,
    Outcome,
    SemanticsOptions,
    frontier_delta,
    merge_frontiers,
    merge_reports,
    settled,
    sup_delta,
)
from pcfg_engine.store_dist import Dist, add
from tests.conftest import UNIVERSE, d_r, store


def _report(**changes: object) -> ConvergenceReport:
    fields: dict[str, object] = {
        "iterations_used": 3,
        "mass_delta": Fraction(0),
        "sup_delta": Fraction(0),
        "residual_mass": Fraction(1, 2),
        "tolerance": DEFAULT_TOLERANCE,
        "converged": True,
        "certified": False,
        "exact": False,
        "budget_exhausted": False,
    }
    fields.update(changes)
    return ConvergenceReport.model_validate(fields)


@pytest.mark.parametrize(
    "tol, expected",
    [
        ("1e-9", Fraction(1, 10**9)),  # Scientific notation
        ("1/1000", Fraction(1, 1000)),  # Fraction
        (0.5, Fraction(1, 2)),  # Float keeps its decimal value
    ],
)
def test_options_parse_tolerance(tol: object, expected: Fraction) -> None:
    assert SemanticsOptions(tol=tol).tol == expected  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "options",
    [
        {"tol": 0},  # Tolerance must be positive
        {"tol": "-1/10"},  # Negative tolerance
        {"max_k": 0},  # At least one iteration
        {"cache_size": 0},  # Empty cache
    ],
)
def test_invalid_options(options: dict) -> None:
    with pytest.raises(ValidationError):
        SemanticsOptions.model_validate(options)


def test_report_serializes_fractions() -> None:
    dumped = _report(residual_mass=Fraction(1, 3)).model_dump(mode="json")

    assert dumped["residual_mass"] == "1/3"
    assert dumped["tolerance"] == "1/1000000000"


@pytest.mark.parametrize(
    "changes",
    [
        {"budget_exhausted": True},  # Converged and exhausted at once
        {"sup_delta": Fraction(1)},  # Converged with a large delta and residual
        {"converged": False, "certified": True, "budget_exhausted": True},  # Certified without converging
        {"exact": True, "certified": True},  # Exact with residual mass left
        {"exact": True, "residual_mass": Fraction(0)},  # Exact but not certified
    ],
)
def test_inconsistent_reports(changes: dict) -> None:
    with pytest.raises(ValidationError):
        _report(**changes)


def test_immediate_report() -> None:
    report = ConvergenceReport.immediate(DEFAULT_TOLERANCE)

    assert report.iterations_used == 0
    assert report.exact
    assert report.converged


def test_merge_reports_weakest_status_wins() -> None:
    exact = _report(
        iterations_used=4,
        sup_delta=Fraction(1, 4),
        mass_delta=Fraction(1, 4),
        residual_mass=Fraction(0),
        certified=True,
        exact=True,
    )
    stationary = _report(iterations_used=3)
    exhausted = _report(
        iterations_used=10,
        sup_delta=Fraction(1, 8),
        mass_delta=Fraction(-1, 8),
        residual_mass=Fraction(1, 4),
        converged=False,
        budget_exhausted=True,
    )

    assert merge_reports([exact, stationary], DEFAULT_TOLERANCE).model_dump() == {
        **stationary.model_dump(),
        "iterations_used": 4,
    }
    merged = merge_reports([exact, stationary, exhausted], DEFAULT_TOLERANCE)
    assert merged.budget_exhausted
    assert not merged.converged
    assert merged.iterations_used == 10
    assert merged.sup_delta == Fraction(1, 8)
    assert merged.mass_delta == Fraction(-1, 8)
    assert merged.residual_mass == Fraction(1, 2)
    assert merge_reports([], DEFAULT_TOLERANCE) == ConvergenceReport.immediate(DEFAULT_TOLERANCE)


def test_merge_frontiers_adds_per_pair() -> None:
    merged = merge_frontiers(
        [
            (((5, 6), d_r(2, 0)),),
            (((4, 6), d_r(3, 1)), ((5, 6), d_r(3, 0))),
        ]
    )

    assert merged == (((4, 6), d_r(3, 1)), ((5, 6), add(d_r(2, 0), d_r(3, 0))))


def test_outcome_residual_and_composition() -> None:
    first = Outcome(d_r(0, 0), (((5, 6), d_r(2, 0)),))
    second = Outcome(d_r(1, 0), (((5, 6), d_r(3, 0)),))

    composed = first.then(second)

    assert composed.dist == d_r(1, 0)
    assert composed.residual_mass == Fraction(1, 2)
    assert Outcome(Dist.zero(UNIVERSE)).residual_mass == 0


def test_sup_delta() -> None:
    previous = add(d_r(0, 0), d_r(1, 0, Fraction(1, 8)))
    current = add(d_r(0, 0), d_r(2, 0, Fraction(1, 16)))

    assert sup_delta(previous, current) == Fraction(1, 8)
    assert sup_delta(current, current) == 0
    assert sup_delta(Dist.zero(UNIVERSE), Dist.point(store(0, 0))) == 1


def test_frontier_delta() -> None:
    previous = (((5, 6), add(d_r(1, 1, Fraction(1, 2)), d_r(1, 2, Fraction(1, 4)))),)
    current = (((5, 6), add(d_r(1, 1, Fraction(5, 8)), d_r(1, 2, Fraction(1, 16)))),)

    assert frontier_delta(previous, current) == Fraction(3, 16)
    assert frontier_delta(current, current) == 0
    assert frontier_delta((), current) == Fraction(5, 8)
    assert frontier_delta(previous, (((4, 6), d_r(0, 0, Fraction(1, 8))),)) == Fraction(1, 2)
    assert frontier_delta((), ()) == 0


@pytest.mark.parametrize(
    "delta, frontier_change, residual_before, residual, expected",
    [
        (Fraction(0), Fraction(0), Fraction(1, 2), Fraction(1, 2), True),  # Stationary frontier
        (Fraction(1, 10**7), Fraction(1, 10**7), Fraction(2, 3), Fraction(2, 3) + Fraction(1, 10**8), True),  # Trapped mass, vanishing tail
        (Fraction(1, 10**7), Fraction(1, 10**7), Fraction(4, 10**7), Fraction(3, 10**7), False),  # Geometric tail
        (Fraction(1, 10**7), Fraction(1), Fraction(1), Fraction(1), False),  # Frontier moved to a new store
        (Fraction(1, 1000), Fraction(0), Fraction(1, 2), Fraction(1, 2), False),  # Iterates still apart
        (Fraction(0), Fraction(0), Fraction(0), Fraction(0), True),  # Nothing truncated
    ],
)
def test_settled(
    delta: Fraction,
    frontier_change: Fraction,
    residual_before: Fraction,
    residual: Fraction,
    expected: bool,
) -> None:
    assert settled(delta, frontier_change, residual_before, residual, Fraction(1, 10**6)) is expected
