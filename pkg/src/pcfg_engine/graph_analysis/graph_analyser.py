import logging

import networkx as nx

from pcfg_engine.errors import GraphQueryError, GraphTooLargeError, PrecedenceError
from pcfg_engine.graph_analysis.models import (
    AnalysisOptions,
    AnalysisReport,
    GraphAnalysis,
    LapReport,
    NodeReport,
    PdRelation,
)
from pcfg_engine.pcfg import Pcfg, label_text, require_valid

logger = logging.getLogger(__name__)


def postdominators(graph: Pcfg) -> PdRelation:
    """Iterative-intersection dataflow: ``PD(v) = {v} ∪ ⋂ PD(succ)``."""
    require_valid(graph)
    reversed_graph = graph.digraph.reverse(copy=False)
    order = list(reversed(list(nx.dfs_postorder_nodes(reversed_graph, graph.end))))

    everything = frozenset(graph.nodes)
    pd = {node: everything for node in graph.nodes}
    pd[graph.end] = frozenset({graph.end})

    while True:
        changed = False

        for node in order:
            if node == graph.end:
                continue
            new_pd = frozenset.intersection(
                *(pd[succ] for succ in graph.successors_of(node))
            ) | {node}
            if pd[node] != new_pd:
                pd[node] = new_pd
                changed = True

        if not changed:
            break

    return PdRelation(pd)


def postdominators_brute_force(graph: Pcfg) -> PdRelation:
    """``w`` postdominates ``v`` iff End is unreachable from ``v`` once ``w`` is removed."""
    require_valid(graph)
    pd: dict[int, frozenset[int]] = {}
    for node in graph.nodes:
        found = {node, graph.end}
        for candidate in graph.nodes:
            if candidate in found:
                continue
            pruned = nx.restricted_view(graph.digraph, [candidate], [])
            if not nx.has_path(pruned, node, graph.end):
                found.add(candidate)
        pd[node] = frozenset(found)
    return PdRelation(pd)


def fppd(graph: Pcfg, pd: PdRelation, node: int) -> int:
    """First proper postdominator: the proper postdominator of ``node`` that all
    its other proper postdominators postdominate."""
    if node == graph.end:
        raise GraphQueryError("End has no proper postdominator")
    proper = pd.proper(node)
    for candidate in sorted(proper):
        if pd.of(candidate) == proper:
            return candidate
    raise GraphQueryError(f"Node {node} has no first proper postdominator")


def _guard(graph: Pcfg, options: AnalysisOptions) -> None:
    if len(graph.nodes) > options.path_node_limit:
        raise GraphTooLargeError(len(graph.nodes), options.path_node_limit)


def lap(
    graph: Pcfg,
    source: int,
    target: int,
    pd: PdRelation | None = None,
    options: AnalysisOptions | None = None,
) -> int:
    """Length (in edges) of the longest acyclic path from ``source`` to ``target``.

    Raises:
        NotPostdominatedError: ``target`` does not postdominate ``source``.
        GraphTooLargeError: the graph exceeds the path enumeration limit.
    """
    (pd or postdominators(graph)).require(source, target)
    if source == target:
        return 0
    _guard(graph, options or AnalysisOptions())
    return max(
        len(path) - 1 for path in nx.all_simple_paths(graph.digraph, source, target)
    )


def prec(
    graph: Pcfg,
    node: int,
    first: int,
    second: int,
    pd: PdRelation | None = None,
    options: AnalysisOptions | None = None,
) -> bool:
    """True iff ``first`` occurs strictly before ``second`` on every acyclic path
    from ``node`` to End."""
    pd = pd or postdominators(graph)
    proper = pd.proper(node) if node != graph.end else frozenset()
    for candidate in (first, second):
        if candidate not in proper:
            raise PrecedenceError(
                f"Node {candidate} is not a proper postdominator of node {node}"
            )
    if first == second:
        return False
    _guard(graph, options or AnalysisOptions())
    return all(
        path.index(first) < path.index(second)
        for path in nx.all_simple_paths(graph.digraph, node, graph.end)
    )


def cycle_inducing(
    graph: Pcfg,
    node: int,
    pd: PdRelation | None = None,
    options: AnalysisOptions | None = None,
) -> bool:
    pd = pd or postdominators(graph)
    join = fppd(graph, pd, node)
    base = lap(graph, node, join, pd, options)
    return any(
        lap(graph, succ, join, pd, options) >= base for succ in graph.successors_of(node)
    )


def simple_cycles(graph: Pcfg, options: AnalysisOptions | None = None) -> list[list[int]]:
    _guard(graph, options or AnalysisOptions())
    return sorted(nx.simple_cycles(graph.digraph), key=lambda cycle: (len(cycle), cycle))


class GraphAnalyser:
    """Precomputes postdominators, fppd and the LAP comparisons for a graph."""

    def __init__(self, options: AnalysisOptions | None = None) -> None:
        self.options = options or AnalysisOptions()

    def analyse(self, graph: Pcfg) -> GraphAnalysis:
        pd = postdominators(graph)
        analysis = GraphAnalysis(
            pd=pd,
            fppd={
                node: fppd(graph, pd, node) for node in graph.nodes if node != graph.end
            },
            loops_back={},
            cycle_inducing=frozenset(),
        )

        loops_back: dict[int, tuple[bool, ...]] = {}
        for node in graph.nodes:
            if not graph.is_branch(node):
                continue
            join = analysis.fppd[node]
            base = self.lap(graph, analysis, node, join)
            loops_back[node] = tuple(
                self.lap(graph, analysis, succ, join) >= base
                for succ in graph.successors_of(node)
            )
        analysis.loops_back = loops_back
        analysis.cycle_inducing = frozenset(
            node for node, flags in loops_back.items() if any(flags)
        )
        logger.debug(
            "Analysed %d nodes: cycle-inducing %s",
            len(graph.nodes),
            sorted(analysis.cycle_inducing),
        )
        return analysis

    def lap(self, graph: Pcfg, analysis: GraphAnalysis, source: int, target: int) -> int:
        key = (source, target)
        if key not in analysis.lap_table:
            analysis.lap_table[key] = lap(graph, source, target, analysis.pd, self.options)
        return analysis.lap_table[key]

    def report(self, graph: Pcfg) -> AnalysisReport:
        analysis = self.analyse(graph)
        return AnalysisReport(
            start=graph.start,
            end=graph.end,
            nodes=[
                NodeReport(
                    id=node,
                    label=label_text(graph.label(node)),
                    fppd=analysis.fppd.get(node),
                    cycle_inducing=node in analysis.cycle_inducing,
                )
                for node in graph.nodes
            ],
            lap=[
                LapReport(
                    source=source,
                    target=target,
                    lap=self.lap(graph, analysis, source, target),
                )
                for source, target in analysis.pd.pairs()
            ],
        )
