from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from pydantic import BaseModel, Field

from pcfg_engine.errors import NotPostdominatedError


class AnalysisOptions(BaseModel):
    """Limits for the exhaustive path enumerations."""

    path_node_limit: int = Field(
        64,
        ge=1,
        description="Largest graph (in nodes) on which simple paths or cycles are enumerated",
    )


@dataclass(frozen=True)
class PdRelation:
    """``PD``: for each node, the set of nodes that postdominate it (itself included)."""

    postdominators: Mapping[int, frozenset[int]]

    def __contains__(self, pair: object) -> bool:
        if not isinstance(pair, tuple) or len(pair) != 2:
            return False
        source, target = pair
        return target in self.postdominators.get(source, frozenset())

    def of(self, node: int) -> frozenset[int]:
        return self.postdominators[node]

    def proper(self, node: int) -> frozenset[int]:
        return self.postdominators[node] - {node}

    def require(self, source: int, target: int) -> None:
        if (source, target) not in self:
            raise NotPostdominatedError(source, target)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for source in sorted(self.postdominators):
            for target in sorted(self.postdominators[source]):
                yield source, target

    def triples(self) -> Iterator[tuple[int, int, int]]:
        """All ``(v, v1, v2)`` with ``(v, v1)`` and ``(v1, v2)`` in PD."""
        for source, middle in self.pairs():
            for target in sorted(self.postdominators[middle]):
                yield source, middle, target


@dataclass
class GraphAnalysis:
    """Everything the fixed-point semantics needs to know about a graph.

    ``loops_back[v][i]`` is True when the i-th successor of branch node ``v``
    is at least as far (in LAP) from ``fppd(v)`` as ``v`` itself.
    """

    pd: PdRelation
    fppd: Mapping[int, int]
    loops_back: Mapping[int, tuple[bool, ...]]
    cycle_inducing: frozenset[int]
    lap_table: dict[tuple[int, int], int] = field(default_factory=dict)


class NodeReport(BaseModel):
    id: int
    label: str
    fppd: int | None = Field(None, description="First proper postdominator; None for End")
    cycle_inducing: bool


class LapReport(BaseModel):
    source: int
    target: int
    lap: int


class AnalysisReport(BaseModel):
    """Output of ``pcfg analyze``."""

    start: int
    end: int
    nodes: list[NodeReport]
    lap: list[LapReport]
