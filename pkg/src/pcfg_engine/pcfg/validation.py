import networkx as nx

from pcfg_engine.pcfg.models import (
    AssignLabel,
    BranchLabel,
    NoLabel,
    NodeLabel,
    ObserveLabel,
    Pcfg,
    RandomAssignLabel,
    ReturnLabel,
    Violation,
)
from pcfg_engine.syntax import variables


def label_variables(label: NodeLabel) -> frozenset[str]:
    match label:
        case AssignLabel(var, expr):
            return variables(expr) | {var}
        case RandomAssignLabel(var, _):
            return frozenset({var})
        case ObserveLabel(cond) | BranchLabel(cond):
            return variables(cond)
        case ReturnLabel(expr):
            return variables(expr)
    return frozenset()


def validate(graph: Pcfg) -> list[Violation]:
    """Check well-formedness; an empty list means the graph is a valid pCFG."""
    violations: list[Violation] = []

    missing = sorted(
        {graph.start, graph.end}.union(*graph.successors.values()).union(graph.successors)
        - set(graph.labels)
    )
    if missing:
        # reachability is meaningless with dangling ids
        return [Violation("missing-node", tuple(missing))]

    for node in graph.nodes:
        label = graph.label(node)
        succs = graph.successors_of(node)
        if node == graph.end:
            if succs:
                violations.append(Violation("end-has-successor", (node,)))
            if not isinstance(label, ReturnLabel | NoLabel):
                violations.append(
                    Violation("misplaced-label", (node,), "End must be unlabeled or a return")
                )
        elif isinstance(label, ReturnLabel | NoLabel):
            violations.append(
                Violation("misplaced-label", (node,), "only End may be unlabeled or a return")
            )
        elif isinstance(label, BranchLabel) and len(succs) != 2:
            violations.append(
                Violation("bad-out-degree", (node,), f"branch has {len(succs)} successors")
            )
        elif not isinstance(label, BranchLabel) and len(succs) != 1:
            violations.append(
                Violation("bad-out-degree", (node,), f"expected 1 successor, got {len(succs)}")
            )
        undeclared = sorted(label_variables(label) - set(graph.universe))
        if undeclared:
            violations.append(
                Violation("undeclared-variable", (node,), ", ".join(undeclared))
            )

    reachable = nx.descendants(graph.digraph, graph.start) | {graph.start}
    unreachable = tuple(node for node in graph.nodes if node not in reachable)
    if unreachable:
        violations.append(Violation("unreachable", unreachable))

    reaches_end = nx.ancestors(graph.digraph, graph.end) | {graph.end}
    stuck = tuple(node for node in graph.nodes if node not in reaches_end)
    if stuck:
        violations.append(Violation("cannot-reach-end", stuck))

    return violations


def is_deterministic(graph: Pcfg) -> bool:
    """True iff the graph has no observe node and no random assignment."""
    return not any(
        isinstance(label, ObserveLabel | RandomAssignLabel)
        for label in graph.labels.values()
    )
