from typing import Literal

from pydantic import BaseModel, Field, ValidationError, model_validator

from pcfg_engine.errors import GraphFormatError, UserInputError
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
from pcfg_engine.pcfg.transforms import require_valid
from pcfg_engine.syntax import (
    format_bool_expr,
    format_dist_spec,
    format_expr,
    parse_bool_expr,
    parse_dist_spec,
    parse_expr,
)

NodeKind = Literal["skip", "assign", "rassign", "observe", "branch", "return", "none"]

_NEEDS_VAR = ("assign", "rassign")
_NEEDS_TEXT = ("assign", "rassign", "observe", "branch", "return")


class NodeDocument(BaseModel):
    id: int = Field(..., description="Node id")
    kind: NodeKind = Field(..., description="Label kind")
    var: str | None = Field(None, description="Assigned variable (assign, rassign)")
    text: str | None = Field(
        None, description="Expression, condition or distribution in source syntax"
    )

    @model_validator(mode="after")
    def validate_fields(self) -> "NodeDocument":
        if self.kind in _NEEDS_VAR and not self.var:
            raise ValueError(f"Node {self.id} of kind '{self.kind}' needs 'var'.")
        if self.kind in _NEEDS_TEXT and not self.text:
            raise ValueError(f"Node {self.id} of kind '{self.kind}' needs 'text'.")
        return self


class EdgeDocument(BaseModel):
    source: int
    target: int
    tag: Literal["T", "F"] | None = Field(
        None, description="True/false edge of a branch node"
    )


class PcfgDocument(BaseModel):
    """JSON form of a pCFG (``.pcfg.json``)."""

    universe: list[str] = Field(..., description="Ordered variable names")
    start: int
    end: int
    nodes: list[NodeDocument]
    edges: list[EdgeDocument]

    @classmethod
    def from_pcfg(cls, graph: Pcfg) -> "PcfgDocument":
        return cls(
            universe=list(graph.universe),
            start=graph.start,
            end=graph.end,
            nodes=[_node_document(node, graph.label(node)) for node in graph.nodes],
            edges=[
                EdgeDocument(source=source, target=target, tag=tag)
                for source, target, tag in graph.edges()
            ],
        )

    def to_pcfg(self) -> Pcfg:
        labels: dict[int, NodeLabel] = {}
        for node in self.nodes:
            if node.id in labels:
                raise GraphFormatError(f"Node {node.id} is declared twice")
            labels[node.id] = _parse_label(node)

        successors: dict[int, tuple[int, ...]] = {node: () for node in labels}
        tagged: dict[int, dict[str, int]] = {}
        for edge in self.edges:
            if edge.tag is None:
                successors[edge.source] = (*successors.get(edge.source, ()), edge.target)
                continue
            if not isinstance(labels.get(edge.source), BranchLabel):
                raise GraphFormatError(
                    f"Edge {edge.source}->{edge.target} is tagged "
                    "but its source is not a branch"
                )
            tags = tagged.setdefault(edge.source, {})
            if edge.tag in tags:
                raise GraphFormatError(f"Branch {edge.source} has two '{edge.tag}' edges")
            tags[edge.tag] = edge.target
        for node, tags in tagged.items():
            if set(tags) != {"T", "F"} or successors[node]:
                raise GraphFormatError(f"Branch {node} needs exactly one T and one F edge")
            successors[node] = (tags["T"], tags["F"])

        graph = Pcfg(
            universe=tuple(self.universe),
            labels=labels,
            successors=successors,
            start=self.start,
            end=self.end,
        )
        return require_valid(graph)


def _node_document(node: int, label: NodeLabel) -> NodeDocument:
    match label:
        case SkipLabel():
            return NodeDocument(id=node, kind="skip")
        case AssignLabel(var, expr):
            return NodeDocument(id=node, kind="assign", var=var, text=format_expr(expr))
        case RandomAssignLabel(var, dist):
            return NodeDocument(id=node, kind="rassign", var=var, text=format_dist_spec(dist))
        case ObserveLabel(cond):
            return NodeDocument(id=node, kind="observe", text=format_bool_expr(cond))
        case BranchLabel(cond):
            return NodeDocument(id=node, kind="branch", text=format_bool_expr(cond))
        case ReturnLabel(expr):
            return NodeDocument(id=node, kind="return", text=format_expr(expr))
    return NodeDocument(id=node, kind="none")


def _parse_label(node: NodeDocument) -> NodeLabel:
    text = node.text or ""
    try:
        match node.kind:
            case "skip":
                return SkipLabel()
            case "assign":
                return AssignLabel(node.var or "", parse_expr(text))
            case "rassign":
                return RandomAssignLabel(node.var or "", parse_dist_spec(text))
            case "observe":
                return ObserveLabel(parse_bool_expr(text))
            case "branch":
                return BranchLabel(parse_bool_expr(text))
            case "return":
                return ReturnLabel(parse_expr(text))
    except UserInputError as e:
        raise GraphFormatError(f"Node {node.id}: {e}") from e
    return NoLabel()


def dump_pcfg(graph: Pcfg) -> str:
    return PcfgDocument.from_pcfg(graph).model_dump_json(indent=2, exclude_none=True)


def load_pcfg(text: str) -> Pcfg:
    """Parse and validate a ``.pcfg.json`` document.

    Raises:
        GraphFormatError: malformed document or graph with violations.
    """
    try:
        document = PcfgDocument.model_validate_json(text)
    except ValidationError as e:
        raise GraphFormatError(f"Invalid graph document: {e}") from e
    return document.to_pcfg()
