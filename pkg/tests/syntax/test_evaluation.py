import pytest

from pcfg_engine.errors import EvaluationError
from pcfg_engine.syntax import (
    And,
    BinOp,
    BoolConst,
    Compare,
    Const,
    Or,
    Var,
    contains_loop,
    count_statements,
    eval_bool,
    eval_expr,
    is_deterministic_stmt,
    parse_bool_expr,
    parse_expr,
    parse_program,
    parse_stmt,
    uninitialised_reads,
)
from tests.conftest import P1_SOURCE, p2_source


@pytest.mark.parametrize(
    "text, store, expected",
    [
        ("x + y * 2", {"x": 1, "y": 3}, 7),  # Precedence
        ("7 / 2", {}, 3),  # Integer division
        ("-7 / 2", {}, -4),  # Division rounds towards negative infinity
        ("x - 10", {"x": 4}, -6),  # Negative results are allowed in expressions
    ],
)
def test_eval_expr(text: str, store: dict[str, int], expected: int) -> None:
    assert eval_expr(parse_expr(text), store) == expected


def test_division_by_zero() -> None:
    with pytest.raises(EvaluationError):
        eval_expr(parse_expr("x / (y - y)"), {"x": 1, "y": 2})


@pytest.mark.parametrize(
    "text, store, expected",
    [
        ("x < y", {"x": 1, "y": 2}, True),
        ("x = y or x > 5", {"x": 1, "y": 2}, False),
        ("not (x != 1) and y >= 2", {"x": 1, "y": 2}, True),
        ("x <= 1 and not y > 2", {"x": 1, "y": 3}, False),
    ],
)
def test_eval_bool(text: str, store: dict[str, int], expected: bool) -> None:
    assert eval_bool(parse_bool_expr(text), store) is expected


def test_eval_bool_short_circuits() -> None:
    failing = Compare("=", BinOp("/", Const(1), Const(0)), Const(0))

    assert eval_bool(And(BoolConst(False), failing), {}) is False
    assert eval_bool(Or(BoolConst(True), failing), {}) is True


def test_statement_properties() -> None:
    p1 = parse_program(P1_SOURCE).body
    p2 = parse_program(p2_source("y := 1")).body

    assert count_statements(p1) == 3
    assert count_statements(p2) == 6
    assert not is_deterministic_stmt(p1)
    assert is_deterministic_stmt(parse_stmt("x := 1; while x < 3 { x := x + 1 }"))
    assert not contains_loop(p1)
    assert contains_loop(p2)


@pytest.mark.parametrize(
    "source, expected",
    [
        (P1_SOURCE, []),  # Everything is assigned before use
        ("var x y; x := y + 1; return x", ["y"]),  # Read before assignment
        ("var x y; if x > 0 { y := 1 } else { skip }; return y", ["x", "y"]),  # Assigned on one branch only
        ("var x y; x := 0; while x < 2 { y := 1; x := x + 1 }; return y", ["y"]),  # Loop body may not run
        ("var x y; x := 0; skip; return 0", []),  # Unused variables are fine
    ],
)
def test_uninitialised_reads(source: str, expected: list[str]) -> None:
    assert uninitialised_reads(parse_program(source)) == expected


def test_store_lookup_uses_names() -> None:
    assert eval_expr(Var("y"), {"x": 1, "y": 9}) == 9
