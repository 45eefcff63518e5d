import logging
import math
from collections import Counter
from fractions import Fraction

import pytest
from pydantic import ValidationError

from pcfg_engine.adequacy import (
    Pcg32,
    SamplingOptions,
    draw,
    sample_program,
    shard_seed,
    simulate,
)
from pcfg_engine.adequacy.sampler import shard_sizes
from pcfg_engine.errors import NegativeExpectationError
from pcfg_engine.fixpoint_semantics import SemanticsEngine
from pcfg_engine.store_dist import Dist, Store
from pcfg_engine.syntax import DistSpec, parse_dist_spec, parse_program
from pcfg_engine.translate import translate_program
from tests.conftest import P1_SOURCE


def test_draw_follows_weights() -> None:
    generator = Pcg32(3)
    psi = parse_dist_spec("{-1: 1/8, 4: 3/8, 9: 1/2}")

    counts = Counter(draw(psi, generator) for _ in range(8000))

    assert set(counts) == {-1, 4, 9}
    assert abs(counts[9] / 8000 - 0.5) < 0.03
    assert abs(counts[-1] / 8000 - 0.125) < 0.03
    assert draw(DistSpec(((5, Fraction(1)),)), generator) == 5


@pytest.mark.parametrize(
    "step_bound, expected",
    [
        (6, "accepted"),  # Assignment, three guards and two body steps
        (5, "step-bound"),  # One step short
    ],
)
def test_simulate_counts_steps(step_bound: int, expected: str) -> None:
    program = parse_program("var x; x := 0; while x < 2 { x := x + 1 }; return x")

    status, store = simulate(program, Pcg32(0), step_bound)

    assert status == expected
    if status == "accepted":
        assert store == {"x": 2}


def test_simulate_rejects_on_failed_observation() -> None:
    program = parse_program("var x; observe(x > 0); x := 5; return x")

    status, store = simulate(program, Pcg32(0), 100)

    assert status == "rejected"
    assert store == {"x": 0}


def test_sample_conditioning_program() -> None:
    report = sample_program(parse_program(P1_SOURCE), SamplingOptions(n=100_000, seed=42))

    assert report.n_total == 100_000
    assert report.n_step_bound_hit == 0
    assert report.expectation_defined
    assert abs(float(report.empirical_normalized_expectation or 0) - 8 / 3) <= 0.05
    assert abs(float(report.acceptance_rate) - 3 / 16) <= 0.01
    supports = {tuple(entry.store) for entry in report.empirical_end_dist.entries}
    assert supports == {(2, 3), (3, 2), (3, 3)}


def test_sampling_is_reproducible() -> None:
    program = parse_program(P1_SOURCE)
    options = SamplingOptions(n=3000, seed=11, shards=3)

    first = sample_program(program, options)
    second = sample_program(program, options)
    parallel = sample_program(program, options.model_copy(update={"workers": 2}))

    assert first == second
    assert first == parallel
    assert first != sample_program(program, options.model_copy(update={"seed": 12}))


def test_no_accepted_runs() -> None:
    report = sample_program(
        parse_program("var x; observe(false); return x"), SamplingOptions(n=50)
    )

    assert report.n_rejected_observe == 50
    assert not report.expectation_defined
    assert report.empirical_normalized_expectation is None
    assert report.empirical_end_dist.entries == []


def test_step_bound_hits_are_counted(caplog: pytest.LogCaptureFixture) -> None:
    program = parse_program("var x; while true { skip }; return x")

    with caplog.at_level(logging.WARNING):
        report = sample_program(program, SamplingOptions(n=10, step_bound=50))

    assert report.n_step_bound_hit == 10
    assert report.acceptance_rate == 0
    assert "hit the step bound" in caplog.text


def test_negative_return_value_is_rejected() -> None:
    with pytest.raises(NegativeExpectationError):
        sample_program(parse_program("var x; x := 0 - 3; return x"), SamplingOptions(n=5))


def test_shards() -> None:
    assert shard_sizes(10, 3) == [4, 3, 3]
    assert shard_seed(0, 0) != shard_seed(0, 1)
    with pytest.raises(ValidationError):
        SamplingOptions(n=2, shards=3)


def test_end_frequencies_match_the_exact_end_distribution() -> None:
    program = parse_program("var y; while y = 0 { y ~ {0: 1/2, 1: 1/3, 2: 1/6} }; return y")
    graph = translate_program(program)
    exact, report = SemanticsEngine(graph).run_graph(Dist.point(Store.bottom(graph.universe)))

    sampled = sample_program(program, SamplingOptions(n=20_000, seed=7))

    assert report.certified
    assert sampled.n_accepted == sampled.n_total
    assert {tuple(entry.store) for entry in sampled.empirical_end_dist.entries} == {(1,), (2,)}
    for entry in sampled.empirical_end_dist.entries:
        expected = float(exact[Store(graph.universe, tuple(entry.store))] / exact.mass)
        frequency = float(entry.weight) * sampled.n_total / sampled.n_accepted
        sigma = math.sqrt(expected * (1 - expected) / sampled.n_accepted)
        assert abs(frequency - expected) <= 3 * sigma
