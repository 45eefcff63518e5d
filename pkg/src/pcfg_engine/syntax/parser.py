"""Concrete syntax of structured probabilistic programs.

    var x y;
    x ~ {0: 1/4, 1: 1/4, 2: 1/4, 3: 1/4};
    y ~ {0: 1/4, 1: 1/4, 2: 1/4, 3: 1/4};
    observe(x + y >= 5);
    return x

Sequencing is right-associative. ``{ stmt }`` groups a sequence explicitly;
the printer only emits it for left-nested sequences.
"""

from fractions import Fraction
from typing import Any

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from pcfg_engine.errors import DistSpecError, PcfgEngineError, ProgramSyntaxError
from pcfg_engine.syntax.models import (
    And,
    Assign,
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
)

GRAMMAR = r"""
    program: "var" NAME+ ";" stmt ";" "return" expr

    ?stmt: simple_stmt
         | simple_stmt ";" stmt                         -> seq

    ?simple_stmt: "skip"                                -> skip
         | NAME ":=" expr                               -> assign
         | NAME "~" dist                                -> rassign
         | "observe" "(" bexp ")"                       -> observe
         | "if" bexp "{" stmt "}" "else" "{" stmt "}"   -> if_stmt
         | "while" bexp "{" stmt "}"                    -> while_stmt
         | "{" stmt "}"

    dist: "{" outcome ("," outcome)* "}"
    outcome: SIGNED_INT ":" rat
    rat: INT ("/" INT)?

    ?bexp: disjunction
    ?disjunction: conjunction
         | disjunction "or" conjunction                 -> or_
    ?conjunction: negation
         | conjunction "and" negation                   -> and_
    ?negation: "not" negation                           -> not_
         | bool_atom
    ?bool_atom: "true"                                  -> true_
         | "false"                                      -> false_
         | expr COMPARISON expr                         -> compare
         | "(" bexp ")"

    ?expr: sum
    ?sum: product
         | sum "+" product                              -> add
         | sum "-" product                              -> sub
    ?product: unary
         | product "*" unary                            -> mul
         | product "/" unary                            -> div
    ?unary: "-" unary                                   -> neg
         | atom
    ?atom: INT                                          -> const
         | NAME                                         -> var
         | "(" expr ")"

    COMPARISON: "<=" | ">=" | "!=" | "<" | ">" | "="
    NAME: /(?!(var|skip|observe|if|else|while|return|true|false|and|or|not)\b)[A-Za-z_][A-Za-z0-9_]*/
    SIGNED_INT: /-?[0-9]+/

    %import common.INT
    COMMENT: /#[^\n]*/
    %ignore COMMENT
    %ignore /\s+/
"""

parser = Lark(
    GRAMMAR,
    parser="earley",
    ambiguity="resolve",
    start=["program", "stmt", "expr", "bexp", "dist"],
)


@v_args(inline=True)
class ProgramBuilder(Transformer[Token, Any]):
    """Turns a parse tree into the frozen AST."""

    def program(self, *items: Any) -> Program:
        *names, body, return_expr = items
        return Program(tuple(str(name) for name in names), body, return_expr)

    # statements

    def seq(self, first: Stmt, second: Stmt) -> Stmt:
        return Seq(first, second)

    def skip(self) -> Stmt:
        return Skip()

    def assign(self, name: Token, expr: Expr) -> Stmt:
        return Assign(str(name), expr)

    def rassign(self, name: Token, dist: DistSpec) -> Stmt:
        return RandomAssign(str(name), dist)

    def observe(self, cond: BoolExpr) -> Stmt:
        return Observe(cond)

    def if_stmt(self, cond: BoolExpr, then: Stmt, orelse: Stmt) -> Stmt:
        return If(cond, then, orelse)

    def while_stmt(self, cond: BoolExpr, body: Stmt) -> Stmt:
        return While(cond, body)

    # distributions

    def dist(self, *outcomes: tuple[int, Fraction]) -> DistSpec:
        return DistSpec(tuple(outcomes))

    def outcome(self, value: Token, weight: Fraction) -> tuple[int, Fraction]:
        return int(value), weight

    def rat(self, numerator: Token, denominator: Token | None = None) -> Fraction:
        if denominator is None:
            return Fraction(int(numerator))
        if int(denominator) == 0:
            raise DistSpecError(f"Weight {numerator}/{denominator} has a zero denominator")
        return Fraction(int(numerator), int(denominator))

    # conditions

    def or_(self, left: BoolExpr, right: BoolExpr) -> BoolExpr:
        return Or(left, right)

    def and_(self, left: BoolExpr, right: BoolExpr) -> BoolExpr:
        return And(left, right)

    def not_(self, operand: BoolExpr) -> BoolExpr:
        return Not(operand)

    def true_(self) -> BoolExpr:
        return BoolConst(True)

    def false_(self) -> BoolExpr:
        return BoolConst(False)

    def compare(self, left: Expr, op: Token, right: Expr) -> BoolExpr:
        return Compare(str(op), left, right)  # type: ignore[arg-type]

    # expressions

    def add(self, left: Expr, right: Expr) -> Expr:
        return BinOp("+", left, right)

    def sub(self, left: Expr, right: Expr) -> Expr:
        return BinOp("-", left, right)

    def mul(self, left: Expr, right: Expr) -> Expr:
        return BinOp("*", left, right)

    def div(self, left: Expr, right: Expr) -> Expr:
        return BinOp("/", left, right)

    def neg(self, operand: Expr) -> Expr:
        if isinstance(operand, Const):
            return Const(-operand.value)
        return BinOp("-", Const(0), operand)

    def const(self, token: Token) -> Expr:
        return Const(int(token))

    def var(self, token: Token) -> Expr:
        return Var(str(token))


program_builder = ProgramBuilder()


def _parse(text: str, start: str) -> Any:
    try:
        tree = parser.parse(text, start=start)
        return program_builder.transform(tree)
    except UnexpectedInput as e:
        line = e.line if e.line > 0 else None
        column = e.column if e.column > 0 else None
        raise ProgramSyntaxError(_describe(e), line, column) from e
    except VisitError as e:
        if isinstance(e.orig_exc, PcfgEngineError):
            raise e.orig_exc from e
        raise


def _describe(error: UnexpectedInput) -> str:
    token = getattr(error, "token", None)
    if token is not None:
        if token.type == "$END":
            return "unexpected end of input"
        return f"unexpected {str(token)!r}"
    char = getattr(error, "char", None)
    if char is not None:
        return f"unexpected character {char!r}"
    return "invalid syntax"


def parse_program(text: str) -> Program:
    """Parse a complete ``var ...; stmt; return expr`` program.

    Raises:
        ProgramSyntaxError: the text does not match the grammar.
        UndeclaredVariableError: a variable is used but not declared.
        DistSpecError: a distribution literal is not a probability distribution.
    """
    result: Program = _parse(text, "program")
    return result


def parse_stmt(text: str) -> Stmt:
    result: Stmt = _parse(text, "stmt")
    return result


def parse_expr(text: str) -> Expr:
    result: Expr = _parse(text, "expr")
    return result


def parse_bool_expr(text: str) -> BoolExpr:
    result: BoolExpr = _parse(text, "bexp")
    return result


def parse_dist_spec(text: str) -> DistSpec:
    result: DistSpec = _parse(text, "dist")
    return result
