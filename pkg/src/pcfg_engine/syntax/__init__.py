"""Structured probabilistic programs: AST, evaluation, parser and printer."""

from pcfg_engine.syntax.evaluation import (
    contains_loop,
    count_statements,
    eval_bool,
    eval_expr,
    is_deterministic_stmt,
    uninitialised_reads,
)
from pcfg_engine.syntax.models import (
    And,
    Assign,
    AtomicStmt,
    BinOp,
    BoolConst,
    BoolExpr,
    Compare,
    Const,
    DistSpec,
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
    seq,
    variables,
)
from pcfg_engine.syntax.parser import (
    parse_bool_expr,
    parse_dist_spec,
    parse_expr,
    parse_program,
    parse_stmt,
)
from pcfg_engine.syntax.printer import (
    format_bool_expr,
    format_dist_spec,
    format_expr,
    format_stmt,
    pretty_print,
)

__all__ = [
    "And",
    "Assign",
    "AtomicStmt",
    "BinOp",
    "BoolConst",
    "BoolExpr",
    "Compare",
    "Const",
    "DistSpec",
    "Expr",
    "If",
    "Not",
    "Observe",
    "Or",
    "Program",
    "RandomAssign",
    "Seq",
    "Skip",
    "Stmt",
    "Var",
    "While",
    "contains_loop",
    "count_statements",
    "eval_bool",
    "eval_expr",
    "format_bool_expr",
    "format_dist_spec",
    "format_expr",
    "format_stmt",
    "is_deterministic_stmt",
    "parse_bool_expr",
    "parse_dist_spec",
    "parse_expr",
    "parse_program",
    "parse_stmt",
    "pretty_print",
    "seq",
    "uninitialised_reads",
    "variables",
]
