from fractions import Fraction
from pathlib import Path

from pcfg_engine.pcfg import (
    AssignLabel,
    BranchLabel,
    NodeLabel,
    ObserveLabel,
    Pcfg,
    RandomAssignLabel,
    ReturnLabel,
)
from pcfg_engine.store_dist import Dist, Store
from pcfg_engine.syntax import (
    BinOp,
    Compare,
    Const,
    DistSpec,
    Var,
    parse_expr,
)

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

UNIVERSE = ("x", "y")

PSI4 = DistSpec.uniform(range(4))

P1_SOURCE = """
var x y;
x ~ {0: 1/4, 1: 1/4, 2: 1/4, 3: 1/4};
y ~ {0: 1/4, 1: 1/4, 2: 1/4, 3: 1/4};
observe(x + y >= 5);
return x
"""


def p2_source(body: str) -> str:
    return f"""
var x y;
x ~ {{0: 1/4, 1: 1/4, 2: 1/4, 3: 1/4}};
y := 0;
if x >= 2 {{
    while y < 3 {{
        {body}
    }}
}} else {{
    skip
}};
return x
"""


# Half of the runs get stuck cycling on y = 1, a quarter retry, a quarter leave.
TRAP_SOURCE = """
var y;
while y < 3 {
    if y = 1 { skip } else { y ~ {1: 1/2, 2: 1/4, 3: 1/4} }
};
return y
"""


# Loop bodies of the three P2 variants, as statement text and as G2 node 5.
P2_BODIES = {
    "const": "y := 1",
    "incr": "y := y + 1",
    "random": "y ~ {0: 1/4, 1: 1/4, 2: 1/4, 3: 1/4}",
}


def g2_body_label(variant: str) -> NodeLabel:
    if variant == "random":
        return RandomAssignLabel("y", PSI4)
    return AssignLabel("y", parse_expr(P2_BODIES[variant].split(":=")[1]))


def make_g1() -> Pcfg:
    """x ~ ψ4; y ~ ψ4; observe(x + y >= 5); return x"""
    return Pcfg(
        universe=UNIVERSE,
        labels={
            1: RandomAssignLabel("x", PSI4),
            2: RandomAssignLabel("y", PSI4),
            3: ObserveLabel(Compare(">=", BinOp("+", Var("x"), Var("y")), Const(5))),
            4: ReturnLabel(Var("x")),
        },
        successors={1: (2,), 2: (3,), 3: (4,), 4: ()},
        start=1,
        end=4,
    )


def make_g2(body: NodeLabel) -> Pcfg:
    """x ~ ψ4; y := 0; if x >= 2 then (while y < 3 do body); return x"""
    return Pcfg(
        universe=UNIVERSE,
        labels={
            1: RandomAssignLabel("x", PSI4),
            2: AssignLabel("y", Const(0)),
            3: BranchLabel(Compare(">=", Var("x"), Const(2))),
            4: BranchLabel(Compare("<", Var("y"), Const(3))),
            5: body,
            6: ReturnLabel(Var("x")),
        },
        successors={1: (2,), 2: (3,), 3: (4, 6), 4: (5, 6), 5: (4,), 6: ()},
        start=1,
        end=6,
    )


def store(x: int, y: int) -> Store:
    return Store(UNIVERSE, (x, y))


def d_r(i: int, j: int, r: Fraction | int = Fraction(1, 4)) -> Dist:
    """``D^r_{i,j}``: weight ``r`` on the single store ``{x: i, y: j}``."""
    return Dist.point(store(i, j), r)
