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

INDENT = "    "

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def pretty_print(program: Program) -> str:
    """Render a program in the concrete syntax accepted by ``parse_program``."""
    lines = [f"var {' '.join(program.universe)};"]
    lines.extend(_stmt_lines(program.body, 0))
    lines[-1] += ";"
    lines.append(f"return {format_expr(program.return_expr)}")
    return "\n".join(lines)


def format_stmt(stmt: Stmt) -> str:
    return "\n".join(_stmt_lines(stmt, 0))


def format_expr(expr: Expr) -> str:
    match expr:
        case Const(value):
            return str(value)
        case Var(name):
            return name
        case BinOp(op, left, right):
            precedence = _PRECEDENCE[op]
            lhs = _wrap(left, precedence, strict=False)
            rhs = _wrap(right, precedence, strict=True)
            return f"{lhs} {op} {rhs}"
    raise TypeError(f"Unsupported expression: {expr!r}")


def _wrap(expr: Expr, precedence: int, strict: bool) -> str:
    text = format_expr(expr)
    if isinstance(expr, BinOp):
        inner = _PRECEDENCE[expr.op]
        if inner < precedence or (strict and inner == precedence):
            return f"({text})"
    return text


def format_bool_expr(cond: BoolExpr) -> str:
    match cond:
        case BoolConst(value):
            return "true" if value else "false"
        case Compare(op, left, right):
            return f"{format_expr(left)} {op} {format_expr(right)}"
        case Not(operand):
            if isinstance(operand, And | Or):
                return f"not ({format_bool_expr(operand)})"
            return f"not {format_bool_expr(operand)}"
        case And(left, right):
            lhs = format_bool_expr(left)
            rhs = format_bool_expr(right)
            if isinstance(left, Or):
                lhs = f"({lhs})"
            if isinstance(right, And | Or):
                rhs = f"({rhs})"
            return f"{lhs} and {rhs}"
        case Or(left, right):
            lhs = format_bool_expr(left)
            rhs = format_bool_expr(right)
            if isinstance(right, Or):
                rhs = f"({rhs})"
            return f"{lhs} or {rhs}"
    raise TypeError(f"Unsupported condition: {cond!r}")


def format_dist_spec(dist: DistSpec) -> str:
    return "{" + ", ".join(f"{value}: {weight}" for value, weight in dist.outcomes) + "}"


def _stmt_lines(stmt: Stmt, depth: int) -> list[str]:
    pad = INDENT * depth
    match stmt:
        case Skip():
            return [f"{pad}skip"]
        case Assign(var, expr):
            return [f"{pad}{var} := {format_expr(expr)}"]
        case RandomAssign(var, dist):
            return [f"{pad}{var} ~ {format_dist_spec(dist)}"]
        case Observe(cond):
            return [f"{pad}observe({format_bool_expr(cond)})"]
        case Seq(first, second):
            if isinstance(first, Seq):
                # left-nested sequences need explicit grouping to survive a re-parse
                head = [f"{pad}{{", *_stmt_lines(first, depth + 1), f"{pad}}}"]
            else:
                head = _stmt_lines(first, depth)
            head[-1] += ";"
            return head + _stmt_lines(second, depth)
        case If(cond, then, orelse):
            return [
                f"{pad}if {format_bool_expr(cond)} {{",
                *_stmt_lines(then, depth + 1),
                f"{pad}}} else {{",
                *_stmt_lines(orelse, depth + 1),
                f"{pad}}}",
            ]
        case While(cond, body):
            return [
                f"{pad}while {format_bool_expr(cond)} {{",
                *_stmt_lines(body, depth + 1),
                f"{pad}}}",
            ]
    raise TypeError(f"Unsupported statement: {stmt!r}")
