from collections.abc import Iterable

from pcfg_engine.pcfg import (
    AssignLabel,
    BranchLabel,
    NodeLabel,
    NoLabel,
    ObserveLabel,
    Pcfg,
    RandomAssignLabel,
    ReturnLabel,
    SkipLabel,
)
from pcfg_engine.syntax import (
    Assign,
    If,
    Observe,
    Program,
    RandomAssign,
    Seq,
    Skip,
    Stmt,
    While,
    variables,
)


class Translator:
    """Builds the pCFG of a structured statement by structural induction.

    Node ids come from one counter in construction order, so sub-translations
    always have disjoint node sets.
    """

    def __init__(self, universe: Iterable[str]) -> None:
        self.universe = tuple(universe)
        self._initialise_graph_state()

    def _initialise_graph_state(self) -> None:
        self.labels: dict[int, NodeLabel] = {}
        self.successors: dict[int, tuple[int, ...]] = {}

    def translate(self, stmt: Stmt) -> Pcfg:
        self._initialise_graph_state()
        start, end = self._translate(stmt)
        return Pcfg(
            universe=self.universe,
            labels=dict(self.labels),
            successors=dict(self.successors),
            start=start,
            end=end,
        )

    def _fresh(self, label: NodeLabel) -> int:
        node = len(self.labels) + 1
        self.labels[node] = label
        self.successors[node] = ()
        return node

    def _connect(self, source: int, *targets: int) -> None:
        self.successors[source] = targets

    def _translate(self, stmt: Stmt) -> tuple[int, int]:
        match stmt:
            case Skip():
                return self._atomic(SkipLabel())
            case Assign(var, expr):
                return self._atomic(AssignLabel(var, expr))
            case RandomAssign(var, dist):
                return self._atomic(RandomAssignLabel(var, dist))
            case Observe(cond):
                return self._atomic(ObserveLabel(cond))
            case Seq(first, second):
                start1, end1 = self._translate(first)
                start2, end2 = self._translate(second)
                self.labels[end1] = SkipLabel()
                self._connect(end1, start2)
                return start1, end2
            case If(cond, then, orelse):
                branch = self._fresh(BranchLabel(cond))
                start1, end1 = self._translate(then)
                start2, end2 = self._translate(orelse)
                end = self._fresh(NoLabel())
                for sub_end in (end1, end2):
                    self.labels[sub_end] = SkipLabel()
                    self._connect(sub_end, end)
                self._connect(branch, start1, start2)
                return branch, end
            case While(cond, body):
                branch = self._fresh(BranchLabel(cond))
                body_start, body_end = self._translate(body)
                end = self._fresh(NoLabel())
                self.labels[body_end] = SkipLabel()
                self._connect(body_end, branch)
                self._connect(branch, body_start, end)
                return branch, end
        raise TypeError(f"Unsupported statement: {stmt!r}")

    def _atomic(self, label: NodeLabel) -> tuple[int, int]:
        start = self._fresh(label)
        end = self._fresh(NoLabel())
        self._connect(start, end)
        return start, end


def translate_stmt(stmt: Stmt, universe: Iterable[str] | None = None) -> Pcfg:
    """Translate a statement; without a universe its variables are used, sorted."""
    if universe is None:
        universe = sorted(variables(stmt))
    return Translator(universe).translate(stmt)


def translate_program(program: Program) -> Pcfg:
    """Translate the body and label its End with the return expression."""
    graph = translate_stmt(program.body, program.universe)
    return graph.with_end_label(ReturnLabel(program.return_expr))
