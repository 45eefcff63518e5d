from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from pcfg_engine.errors import DeclarationError, DistSpecError, UndeclaredVariableError

BinaryOperator = Literal["+", "-", "*", "/"]
ComparisonOperator = Literal["<", "<=", "=", "!=", ">=", ">"]


# Arithmetic expressions


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: BinaryOperator
    left: "Expr"
    right: "Expr"


type Expr = Const | Var | BinOp


# Boolean expressions


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Compare:
    op: ComparisonOperator
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Not:
    operand: "BoolExpr"


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


type BoolExpr = BoolConst | Compare | Not | And | Or


@dataclass(frozen=True)
class DistSpec:
    """A finite distribution over integers with exact rational weights.

    Weights must be positive, values distinct, and the weights must sum to
    exactly one.
    """

    outcomes: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.outcomes:
            raise DistSpecError("Distribution must have at least one outcome")
        values = [value for value, _ in self.outcomes]
        if len(set(values)) != len(values):
            raise DistSpecError(f"Distribution repeats a value: {values}")
        for value, weight in self.outcomes:
            if weight <= 0:
                raise DistSpecError(f"Weight of {value} must be positive, got {weight}")
        total = sum((weight for _, weight in self.outcomes), Fraction(0))
        if total != 1:
            raise DistSpecError(f"Distribution weights sum to {total}, not 1")

    @classmethod
    def uniform(cls, values: range | tuple[int, ...]) -> "DistSpec":
        values = tuple(values)
        return cls(tuple((value, Fraction(1, len(values))) for value in values))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(value for value, _ in self.outcomes)

    def weight(self, value: int) -> Fraction:
        for candidate, weight in self.outcomes:
            if candidate == value:
                return weight
        return Fraction(0)


# Statements


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class RandomAssign:
    var: str
    dist: DistSpec


@dataclass(frozen=True)
class Observe:
    cond: BoolExpr


@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then: "Stmt"
    orelse: "Stmt"


@dataclass(frozen=True)
class While:
    cond: BoolExpr
    body: "Stmt"


type Stmt = Skip | Assign | RandomAssign | Observe | Seq | If | While

type AtomicStmt = Skip | Assign | RandomAssign | Observe


@dataclass(frozen=True)
class Program:
    """A structured statement followed by ``return expr``."""

    universe: tuple[str, ...]
    body: Stmt
    return_expr: Expr

    def __post_init__(self) -> None:
        if len(set(self.universe)) != len(self.universe):
            raise DeclarationError(f"Variable declared twice in {self.universe}")
        used = variables(self.body) | variables(self.return_expr)
        for name in sorted(used):
            if name not in self.universe:
                raise UndeclaredVariableError(name)


def seq(*stmts: Stmt) -> Stmt:
    """Sequence statements right-associatively, as the parser does."""
    if not stmts:
        return Skip()
    result = stmts[-1]
    for stmt in reversed(stmts[:-1]):
        result = Seq(stmt, result)
    return result


def variables(node: "Expr | BoolExpr | Stmt | DistSpec") -> frozenset[str]:
    """Variables read or written anywhere inside ``node``."""
    match node:
        case Const() | BoolConst() | Skip() | DistSpec():
            return frozenset()
        case Var(name):
            return frozenset({name})
        case BinOp(_, left, right) | Compare(_, left, right):
            return variables(left) | variables(right)
        case And(left, right) | Or(left, right):
            return variables(left) | variables(right)
        case Not(operand):
            return variables(operand)
        case Assign(var, expr):
            return variables(expr) | {var}
        case RandomAssign(var, _):
            return frozenset({var})
        case Observe(cond):
            return variables(cond)
        case Seq(first, second):
            return variables(first) | variables(second)
        case If(cond, then, orelse):
            return variables(cond) | variables(then) | variables(orelse)
        case While(cond, body):
            return variables(cond) | variables(body)
    raise TypeError(f"Unsupported syntax node: {node!r}")
