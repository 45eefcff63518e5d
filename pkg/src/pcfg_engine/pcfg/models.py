from collections.abc import Iterator, Mapping
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Literal

import networkx as nx

from pcfg_engine.syntax import BoolExpr, DistSpec, Expr


@dataclass(frozen=True)
class SkipLabel:
    pass


@dataclass(frozen=True)
class AssignLabel:
    var: str
    expr: Expr


@dataclass(frozen=True)
class RandomAssignLabel:
    var: str
    dist: DistSpec


@dataclass(frozen=True)
class ObserveLabel:
    cond: BoolExpr


@dataclass(frozen=True)
class BranchLabel:
    cond: BoolExpr


@dataclass(frozen=True)
class ReturnLabel:
    expr: Expr


@dataclass(frozen=True)
class NoLabel:
    pass


type NodeLabel = (
    SkipLabel
    | AssignLabel
    | RandomAssignLabel
    | ObserveLabel
    | BranchLabel
    | ReturnLabel
    | NoLabel
)

ViolationKind = Literal[
    "missing-node",
    "end-has-successor",
    "bad-out-degree",
    "misplaced-label",
    "undeclared-variable",
    "unreachable",
    "cannot-reach-end",
]


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    nodes: tuple[int, ...]
    detail: str = ""

    @property
    def message(self) -> str:
        nodes = ", ".join(str(node) for node in self.nodes)
        text = f"{self.kind}({nodes})"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass(frozen=True)
class Pcfg:
    """A probabilistic control-flow graph.

    ``successors[v]`` is ``(true_successor, false_successor)`` for branch
    nodes, a single successor for other inner nodes and empty for End.
    The graph is treated as immutable once built.
    """

    universe: tuple[str, ...]
    labels: Mapping[int, NodeLabel]
    successors: Mapping[int, tuple[int, ...]]
    start: int
    end: int

    @cached_property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.labels))

    def label(self, node: int) -> NodeLabel:
        return self.labels[node]

    def successors_of(self, node: int) -> tuple[int, ...]:
        return self.successors.get(node, ())

    def is_branch(self, node: int) -> bool:
        return isinstance(self.labels[node], BranchLabel)

    def edges(self) -> Iterator[tuple[int, int, Literal["T", "F"] | None]]:
        """Edges in node order; branch edges carry their T/F tag."""
        for node in self.nodes:
            succs = self.successors_of(node)
            if self.is_branch(node) and len(succs) == 2:
                yield node, succs[0], "T"
                yield node, succs[1], "F"
            else:
                for succ in succs:
                    yield node, succ, None

    @cached_property
    def digraph(self) -> nx.DiGraph:
        """Plain digraph view; parallel T/F edges into one node collapse."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from((source, target) for source, target, _ in self.edges())
        return graph

    def with_end_label(self, label: NodeLabel) -> "Pcfg":
        labels = dict(self.labels)
        labels[self.end] = label
        return replace(self, labels=labels)
