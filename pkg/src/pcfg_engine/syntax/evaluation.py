from typing import Protocol

from pcfg_engine.errors import EvaluationError
from pcfg_engine.syntax.models import (
    And,
    Assign,
    BinOp,
    BoolConst,
    BoolExpr,
    Compare,
    Const,
    Expr,
    If,
    Not,
    Observe,
    Or,
    Program,
    RandomAssign,
    Seq,
    Skip,
    Stmt,
    Var,
    While,
    variables,
)


class VariableLookup(Protocol):
    def __getitem__(self, name: str, /) -> int: ...


def eval_expr(expr: Expr, store: VariableLookup) -> int:
    """Evaluate an integer expression. Division rounds towards negative infinity."""
    match expr:
        case Const(value):
            return value
        case Var(name):
            return store[name]
        case BinOp(op, left, right):
            lhs = eval_expr(left, store)
            rhs = eval_expr(right, store)
            if op == "+":
                return lhs + rhs
            if op == "-":
                return lhs - rhs
            if op == "*":
                return lhs * rhs
            if rhs == 0:
                raise EvaluationError(f"Division by zero in {left!r} / {right!r}")
            return lhs // rhs
    raise TypeError(f"Unsupported expression: {expr!r}")


def eval_bool(cond: BoolExpr, store: VariableLookup) -> bool:
    """Evaluate a condition; ``and``/``or`` short-circuit left to right."""
    match cond:
        case BoolConst(value):
            return value
        case Compare(op, left, right):
            lhs = eval_expr(left, store)
            rhs = eval_expr(right, store)
            match op:
                case "<":
                    return lhs < rhs
                case "<=":
                    return lhs <= rhs
                case "=":
                    return lhs == rhs
                case "!=":
                    return lhs != rhs
                case ">=":
                    return lhs >= rhs
                case ">":
                    return lhs > rhs
        case Not(operand):
            return not eval_bool(operand, store)
        case And(left, right):
            return eval_bool(left, store) and eval_bool(right, store)
        case Or(left, right):
            return eval_bool(left, store) or eval_bool(right, store)
    raise TypeError(f"Unsupported condition: {cond!r}")


def is_deterministic_stmt(stmt: Stmt) -> bool:
    """True iff ``stmt`` contains no random assignment and no observe."""
    match stmt:
        case RandomAssign() | Observe():
            return False
        case Seq(first, second):
            return is_deterministic_stmt(first) and is_deterministic_stmt(second)
        case If(_, then, orelse):
            return is_deterministic_stmt(then) and is_deterministic_stmt(orelse)
        case While(_, body):
            return is_deterministic_stmt(body)
    return True


def contains_loop(stmt: Stmt) -> bool:
    match stmt:
        case While():
            return True
        case Seq(first, second):
            return contains_loop(first) or contains_loop(second)
        case If(_, then, orelse):
            return contains_loop(then) or contains_loop(orelse)
    return False


def count_statements(stmt: Stmt) -> int:
    """Number of atomic statements, conditionals and loops (sequencing excluded)."""
    match stmt:
        case Seq(first, second):
            return count_statements(first) + count_statements(second)
        case If(_, then, orelse):
            return 1 + count_statements(then) + count_statements(orelse)
        case While(_, body):
            return 1 + count_statements(body)
    return 1


def uninitialised_reads(program: Program) -> list[str]:
    """Variables that may be read before any assignment, in declaration order.

    The result of a program that reads such a variable depends on the
    initial store.
    """
    flagged: set[str] = set()
    assigned = _definitely_assigned(program.body, frozenset(), flagged)
    _record_reads(program.return_expr, assigned, flagged)
    return [name for name in program.universe if name in flagged]


def _definitely_assigned(
    stmt: Stmt, assigned: frozenset[str], flagged: set[str]
) -> frozenset[str]:
    match stmt:
        case Skip():
            return assigned
        case Assign(var, expr):
            _record_reads(expr, assigned, flagged)
            return assigned | {var}
        case RandomAssign(var, _):
            return assigned | {var}
        case Observe(cond):
            _record_reads(cond, assigned, flagged)
            return assigned
        case Seq(first, second):
            return _definitely_assigned(
                second, _definitely_assigned(first, assigned, flagged), flagged
            )
        case If(cond, then, orelse):
            _record_reads(cond, assigned, flagged)
            return _definitely_assigned(then, assigned, flagged) & (
                _definitely_assigned(orelse, assigned, flagged)
            )
        case While(cond, body):
            _record_reads(cond, assigned, flagged)
            _definitely_assigned(body, assigned, flagged)
            return assigned
    raise TypeError(f"Unsupported statement: {stmt!r}")


def _record_reads(
    node: Expr | BoolExpr, assigned: frozenset[str], flagged: set[str]
) -> None:
    flagged.update(variables(node) - assigned)
