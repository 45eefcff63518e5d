import logging

from pcfg_engine.errors import GraphFormatError
from pcfg_engine.pcfg.models import (
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
from pcfg_engine.pcfg.validation import validate
from pcfg_engine.syntax import format_bool_expr, format_dist_spec, format_expr

logger = logging.getLogger(__name__)


def require_valid(graph: Pcfg) -> Pcfg:
    violations = validate(graph)
    if violations:
        raise GraphFormatError("Graph is not a well-formed pCFG", violations)
    return graph


def label_text(label: NodeLabel) -> str:
    match label:
        case SkipLabel():
            return "skip"
        case AssignLabel(var, expr):
            return f"{var} := {format_expr(expr)}"
        case RandomAssignLabel(var, dist):
            return f"{var} ~ {format_dist_spec(dist)}"
        case ObserveLabel(cond):
            return f"observe({format_bool_expr(cond)})"
        case BranchLabel(cond):
            return format_bool_expr(cond)
        case ReturnLabel(expr):
            return f"return {format_expr(expr)}"
    return ""


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(graph: Pcfg) -> str:
    """Graphviz rendering with nodes sorted by id and branch edges tagged T/F."""
    lines = ["digraph pcfg {", "  node [shape=box];"]
    for node in graph.nodes:
        text = label_text(graph.label(node))
        caption = f"{node}: {text}" if text else str(node)
        attributes = [f'label="{_dot_escape(caption)}"']
        if node == graph.start:
            attributes.append("style=bold")
        if node == graph.end:
            attributes.append("peripheries=2")
        lines.append(f"  {node} [{', '.join(attributes)}];")
    for source, target, tag in graph.edges():
        suffix = f' [label="{tag}"]' if tag else ""
        lines.append(f"  {source} -> {target}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def compress_skips(graph: Pcfg) -> Pcfg:
    """Remove every non-Start skip node, redirecting its in-edges to its successor."""
    require_valid(graph)

    def removable(node: int) -> bool:
        return node != graph.start and isinstance(graph.label(node), SkipLabel)

    def target(node: int) -> int:
        # a cycle of skip nodes could never reach End, so this terminates
        while removable(node):
            node = graph.successors_of(node)[0]
        return node

    kept = [node for node in graph.nodes if not removable(node)]
    compressed = Pcfg(
        universe=graph.universe,
        labels={node: graph.label(node) for node in kept},
        successors={
            node: tuple(target(succ) for succ in graph.successors_of(node)) for node in kept
        },
        start=graph.start,
        end=graph.end,
    )
    logger.debug("Compressed %d skip nodes", len(graph.nodes) - len(kept))
    return compressed


def canonical_form(graph: Pcfg) -> Pcfg:
    """Renumber nodes 1..n in depth-first preorder from Start, true-successor first.

    Two graphs produced by the same construction are isomorphic exactly when
    their canonical forms are equal.
    """
    order: list[int] = []
    seen: set[int] = set()
    stack = [graph.start]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        order.append(node)
        stack.extend(reversed(graph.successors_of(node)))
    # unreachable nodes keep a deterministic position after the reachable ones
    order.extend(node for node in graph.nodes if node not in seen)

    renumber = {node: index for index, node in enumerate(order, start=1)}
    return Pcfg(
        universe=graph.universe,
        labels={renumber[node]: graph.label(node) for node in order},
        successors={
            renumber[node]: tuple(renumber[succ] for succ in graph.successors_of(node))
            for node in order
        },
        start=renumber[graph.start],
        end=renumber[graph.end],
    )


def is_isomorphic(left: Pcfg, right: Pcfg) -> bool:
    return canonical_form(left) == canonical_form(right)


def embed(graph: Pcfg, label: NodeLabel | None = None) -> Pcfg:
    """Place ``graph`` inside a larger graph: its End takes ``label`` (skip by
    default) and gains an edge to a fresh End node."""
    label = label or SkipLabel()
    if isinstance(label, BranchLabel | ReturnLabel | NoLabel):
        raise ValueError(f"An inner node cannot carry {label!r}")
    new_end = max(graph.nodes) + 1
    labels = dict(graph.labels)
    labels[graph.end] = label
    labels[new_end] = NoLabel()
    successors = dict(graph.successors)
    successors[graph.end] = (new_end,)
    successors[new_end] = ()
    return Pcfg(
        universe=graph.universe,
        labels=labels,
        successors=successors,
        start=graph.start,
        end=new_end,
    )
