import logging
from fractions import Fraction

import pytest

from pcfg_engine.errors import GraphFormatError, NotPostdominatedError
from pcfg_engine.fixpoint_semantics import SemanticsEngine, SemanticsOptions
from pcfg_engine.pcfg import SkipLabel, is_deterministic
from pcfg_engine.store_dist import Dist, Store, add, add_all, is_concentrated, scale
from pcfg_engine.syntax import Assign, BinOp, Const, Var, parse_program, seq
from pcfg_engine.translate import translate_program, translate_stmt
from tests.conftest import TRAP_SOURCE, UNIVERSE, d_r, g2_body_label, make_g1, make_g2, store
from tests.generators import ProgramGenerator

START = Dist.point(Store.bottom(UNIVERSE))


def _engine(variant: str, **options: object) -> SemanticsEngine:
    return SemanticsEngine(
        make_g2(g2_body_label(variant)), SemanticsOptions.model_validate(options)
    )


def test_conditioning_graph() -> None:
    result, report = SemanticsEngine(make_g1()).run_graph(START)

    sixteenth = Fraction(1, 16)
    assert result == add_all(
        UNIVERSE, [d_r(2, 3, sixteenth), d_r(3, 2, sixteenth), d_r(3, 3, sixteenth)]
    )
    assert result.mass == Fraction(3, 16)
    assert report.exact
    assert report.iterations_used == 1


def test_nonterminating_loop_converges_without_certificate() -> None:
    result, report = _engine("const").run_graph(START)

    assert result == add(d_r(0, 0), d_r(1, 0))
    assert result.mass == Fraction(1, 2)
    assert report.converged
    assert not report.certified
    assert not report.exact
    assert report.iterations_used == 3
    assert report.residual_mass == Fraction(1, 2)
    assert report.sup_delta == 0


def test_trapped_mass_converges_without_certificate() -> None:
    tol = Fraction(1, 10**6)
    graph = translate_program(parse_program(TRAP_SOURCE))

    result, report = SemanticsEngine(graph, SemanticsOptions(tol=tol, max_k=200)).run_graph(
        Dist.point(Store.bottom(graph.universe))
    )

    assert report.converged
    assert not report.certified
    assert not report.budget_exhausted
    assert report.iterations_used < 50
    assert result.support == (Store(("y",), (3,)),)
    assert abs(result.mass - Fraction(1, 3)) <= tol
    assert abs(report.residual_mass - Fraction(2, 3)) <= tol


def test_counting_loop_is_exact() -> None:
    result, report = _engine("incr").run_graph(START)

    assert result == add_all(UNIVERSE, [d_r(0, 0), d_r(1, 0), d_r(2, 3), d_r(3, 3)])
    assert report.exact
    assert report.iterations_used == 4


def test_random_loop_is_certified() -> None:
    tol = Fraction(1, 10**6)

    result, report = _engine("random", tol=tol).run_graph(START)

    assert report.certified
    assert not report.exact
    assert report.iterations_used == 47
    assert report.residual_mass <= tol
    assert abs(result[store(2, 3)] - Fraction(1, 4)) <= tol
    assert result[store(0, 0)] == Fraction(1, 4)
    assert 1 - tol <= result.mass < 1


@pytest.mark.parametrize("r", [Fraction(1), Fraction(1, 4), Fraction(3, 7)])
def test_loop_iterates(r: Fraction) -> None:
    const, incr, rand = _engine("const"), _engine("incr"), _engine("random")

    for k in range(101):
        for i in range(4):
            for j in range(3):
                assert const.omega_k(k, 4, 6, d_r(i, j, r)).is_zero()
            expected_incr = d_r(i, 3, r) if k >= 4 else Dist.zero(UNIVERSE)
            assert incr.omega_k(k, 4, 6, d_r(i, 0, r)) == expected_incr
            expected_rand = r * (1 - Fraction(3, 4) ** (k - 1)) if k >= 1 else Fraction(0)
            assert rand.omega_k(k, 4, 6, d_r(i, 0, r)) == (
                d_r(i, 3, expected_rand) if expected_rand else Dist.zero(UNIVERSE)
            )
            if k >= 1:
                assert const.omega_k(k, 4, 6, d_r(i, 3, r)) == d_r(i, 3, r)


def test_random_loop_recurrence() -> None:
    engine = _engine("random")
    previous = Fraction(0)

    for k in range(1, 31):
        current = engine.omega_k(k, 4, 6, d_r(0, 0, Fraction(1)))[store(0, 3)]
        assert current == Fraction(3, 4) * previous + (Fraction(1, 4) if k >= 2 else 0)
        previous = current


def test_outcome_records_truncation() -> None:
    outcome = _engine("const").outcome(1, 4, 6, d_r(2, 0))

    assert outcome.dist.is_zero()
    assert outcome.frontier == (((5, 6), d_r(2, 0)),)
    assert outcome.residual_mass == Fraction(1, 4)


def test_omega_zero_and_identity() -> None:
    engine = _engine("incr")

    assert engine.outcome(0, 1, 6, START).dist.is_zero()
    assert engine.omega_k(3, 4, 4, d_r(1, 1)) == d_r(1, 1)
    assert engine.omega_k(3, 1, 6, Dist.zero(UNIVERSE)).is_zero()


def test_omega_on_node_pair() -> None:
    result, report = _engine("incr").omega(5, 4, d_r(2, 1))

    assert result == d_r(2, 2)
    assert report.exact


def test_queries_need_postdominated_pairs() -> None:
    engine = _engine("const")

    with pytest.raises(NotPostdominatedError):
        engine.omega_k(3, 3, 4, START)
    with pytest.raises(NotPostdominatedError):
        engine.omega(3, 5, START)
    with pytest.raises(ValueError, match="non-negative"):
        engine.omega_k(-1, 1, 6, START)


def test_invalid_graph_is_rejected() -> None:
    broken = make_g1().with_end_label(SkipLabel())

    with pytest.raises(GraphFormatError):
        SemanticsEngine(broken)


def test_budget_exhaustion(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING):
        _, report = _engine("random", max_k=5).run_graph(START)

    assert report.budget_exhausted
    assert not report.converged
    assert report.iterations_used == 5
    assert "exhausted its budget" in caplog.text


def test_on_iterate_sees_every_step() -> None:
    masses: list[tuple[int, Fraction]] = []

    _engine("incr").run_graph(START, lambda k, dist: masses.append((k, dist.mass)))

    assert masses == [
        (1, Fraction(1, 2)),
        (2, Fraction(1, 2)),
        (3, Fraction(1, 2)),
        (4, Fraction(1)),
    ]


def test_small_cache_gives_same_results() -> None:
    cached = _engine("random", tol=Fraction(1, 1000)).run_graph(START)
    evicting = _engine("random", tol=Fraction(1, 1000), cache_size=1).run_graph(START)

    assert cached == evicting


def test_clear_cache() -> None:
    engine = _engine("incr")
    first = engine.run_graph(START)

    engine.clear_cache()

    assert engine.run_graph(START) == first


def test_long_chain_does_not_recurse() -> None:
    steps = 400
    stmt = seq(*(Assign("x", BinOp("+", Var("x"), Const(1))) for _ in range(steps)))
    graph = translate_stmt(stmt, UNIVERSE)

    result, _ = SemanticsEngine(graph).run_graph(START)

    assert result == Dist.point(store(steps, 0))


@pytest.mark.parametrize("seed", range(200))
def test_generated_iterates_are_monotone_and_linear(seed: int) -> None:
    generator = ProgramGenerator(seed)
    graph = translate_stmt(generator.statement(), ("c", "x", "y"))
    engine = SemanticsEngine(graph)
    left, right = generator.dist(), generator.dist()
    start, end = graph.start, graph.end

    previous = Dist.zero(left.universe)
    for k in range(4):
        current = engine.omega_k(k, start, end, left)
        assert previous.le(current)
        assert current.mass <= left.mass
        previous = current
    assert engine.omega_k(3, start, end, add(left, right)) == add(
        engine.omega_k(3, start, end, left), engine.omega_k(3, start, end, right)
    )
    assert engine.omega_k(3, start, end, scale(Fraction(1, 3), left)) == scale(
        Fraction(1, 3), engine.omega_k(3, start, end, left)
    )


@pytest.mark.parametrize("seed", range(200))
def test_generated_iterates_compose_along_postdominators(seed: int) -> None:
    generator = ProgramGenerator(seed)
    graph = translate_stmt(generator.statement(), ("c", "x", "y"))
    engine = SemanticsEngine(graph)
    dist = generator.dist()

    for source, middle, target in engine.analysis.pd.triples():
        for k in range(1, 4):
            assert engine.omega_k(k, source, target, dist) == engine.omega_k(
                k, middle, target, engine.omega_k(k, source, middle, dist)
            )


@pytest.mark.parametrize("seed", range(200))
def test_generated_deterministic_graphs_keep_point_masses(seed: int) -> None:
    generator = ProgramGenerator(seed, deterministic=True)
    graph = translate_stmt(generator.statement(), ("c", "x", "y"))
    engine = SemanticsEngine(graph)
    start = Dist.point(generator.store())

    assert is_deterministic(graph)
    for source, target in engine.analysis.pd.pairs():
        for k in range(5):
            assert is_concentrated(engine.omega_k(k, source, target, start)).concentrated
