import logging
from collections import OrderedDict
from collections.abc import Callable, Generator

from pcfg_engine.fixpoint_semantics.models import (
    ConvergenceReport,
    Outcome,
    SemanticsOptions,
    frontier_delta,
    merge_frontiers,
    settled,
    sup_delta,
)
from pcfg_engine.graph_analysis import AnalysisOptions, GraphAnalyser, GraphAnalysis
from pcfg_engine.pcfg import (
    AssignLabel,
    BranchLabel,
    ObserveLabel,
    Pcfg,
    RandomAssignLabel,
    SkipLabel,
    require_valid,
)
from pcfg_engine.store_dist import (
    Dist,
    add_all,
    apply_assign,
    apply_rassign,
    select,
)
from pcfg_engine.syntax import Not

logger = logging.getLogger(__name__)

type Request = tuple[int, int, int, Dist]
type Unfolding = Generator[Request, Outcome, Outcome]


class SemanticsEngine:
    """Evaluates the Kleene chain ``ω_k`` of a pCFG on concrete distributions.

    Each ``h(v, v′)`` clause is a generator that yields the sub-evaluations it
    needs and receives their results, so a long chain of ``h₀`` calls never
    grows the Python stack. Results are memoized per ``(k, v, v′, D)`` in an
    LRU map.

    The engine is single-threaded: share one instance per thread.
    """

    def __init__(
        self,
        graph: Pcfg,
        options: SemanticsOptions | None = None,
        analysis_options: AnalysisOptions | None = None,
    ) -> None:
        self.graph = require_valid(graph)
        self.options = options or SemanticsOptions()
        self.analysis: GraphAnalysis = GraphAnalyser(analysis_options).analyse(graph)
        self._memo: OrderedDict[Request, Outcome] = OrderedDict()
        self._evictions = 0

    def omega_k(self, k: int, source: int, target: int, dist: Dist) -> Dist:
        """``ω_k(source, target)(dist)``."""
        return self.outcome(k, source, target, dist).dist

    def outcome(self, k: int, source: int, target: int, dist: Dist) -> Outcome:
        """``ω_k(source, target)(dist)`` with the truncation frontier."""
        if k < 0:
            raise ValueError(f"Iteration level must be non-negative, got {k}")
        self.analysis.pd.require(source, target)
        return self._evaluate((k, source, target, dist))

    def omega(
        self,
        source: int,
        target: int,
        dist: Dist,
        on_iterate: Callable[[int, Dist], None] | None = None,
    ) -> tuple[Dist, ConvergenceReport]:
        """Approximate ``ω(source, target)(dist)`` by iterating over ``k``.

        ``on_iterate(k, D_k)`` is called after every iteration.
        """
        self.analysis.pd.require(source, target)
        tol = self.options.tol
        if dist.is_zero():
            return dist, ConvergenceReport.immediate(tol)

        previous = self._evaluate((0, source, target, dist))
        for k in range(1, self.options.max_k + 1):
            current = self._evaluate((k, source, target, dist))
            if on_iterate is not None:
                on_iterate(k, current.dist)

            delta = sup_delta(previous.dist, current.dist)
            residual = current.residual_mass
            logger.debug(
                "omega(%d, %d) k=%d mass=%s residual=%s delta=%s",
                source,
                target,
                k,
                current.dist.mass,
                residual,
                delta,
            )
            certified = residual <= tol
            converged = certified or settled(
                delta,
                frontier_delta(previous.frontier, current.frontier),
                previous.residual_mass,
                residual,
                tol,
            )
            if converged or k == self.options.max_k:
                report = ConvergenceReport(
                    iterations_used=k,
                    mass_delta=current.dist.mass - previous.dist.mass,
                    sup_delta=delta,
                    residual_mass=residual,
                    tolerance=tol,
                    converged=converged,
                    certified=certified,
                    exact=residual == 0,
                    budget_exhausted=not converged,
                )
                if converged:
                    logger.info(
                        "omega(%d, %d) converged after %d iterations (residual %s)",
                        source,
                        target,
                        k,
                        residual,
                    )
                else:
                    logger.warning(
                        "omega(%d, %d) exhausted its budget of %d iterations (residual %s)",
                        source,
                        target,
                        k,
                        residual,
                    )
                return current.dist, report
            previous = current

        raise AssertionError("unreachable: max_k >= 1")

    def run_graph(
        self, dist: Dist, on_iterate: Callable[[int, Dist], None] | None = None
    ) -> tuple[Dist, ConvergenceReport]:
        """The meaning of the whole graph: ``ω(Start, End)(dist)``."""
        return self.omega(self.graph.start, self.graph.end, dist, on_iterate)

    def clear_cache(self) -> None:
        self._memo.clear()

    def _evaluate(self, request: Request) -> Outcome:
        result = self._shortcut(request) or self._lookup(request)
        if result is not None:
            return result

        stack: list[tuple[Request, Unfolding]] = [(request, self._unfold(*request))]
        incoming: Outcome | None = None
        while stack:
            current, unfolding = stack[-1]
            try:
                needed = unfolding.send(incoming)  # type: ignore[arg-type]
            except StopIteration as stop:
                stack.pop()
                incoming = stop.value
                self._remember(current, stop.value)
                continue

            incoming = self._shortcut(needed) or self._lookup(needed)
            if incoming is None:
                stack.append((needed, self._unfold(*needed)))

        if incoming is None:
            raise AssertionError("evaluation stack finished without a result")
        return incoming

    def _shortcut(self, request: Request) -> Outcome | None:
        k, source, target, dist = request
        if dist.is_zero():
            return Outcome(dist)
        if k == 0:
            return Outcome(Dist.zero(dist.universe), (((source, target), dist),))
        if source == target:
            return Outcome(dist)
        return None

    def _lookup(self, request: Request) -> Outcome | None:
        result = self._memo.get(request)
        if result is not None:
            self._memo.move_to_end(request)
        return result

    def _remember(self, request: Request, result: Outcome) -> None:
        self._memo[request] = result
        if len(self._memo) > self.options.cache_size:
            self._memo.popitem(last=False)
            self._evictions += 1
            if self._evictions % 10_000 == 1:
                logger.debug("omega_k cache full, %d evictions so far", self._evictions)

    def _unfold(self, k: int, source: int, target: int, dist: Dist) -> Unfolding:
        join = self.analysis.fppd[source]
        if join != target:
            first = yield (k, source, join, dist)
            second = yield (k, join, target, first.dist)
            return first.then(second)

        match self.graph.label(source):
            case SkipLabel():
                return Outcome(dist)
            case AssignLabel(var, expr):
                return Outcome(apply_assign(var, expr, dist))
            case RandomAssignLabel(var, psi):
                return Outcome(apply_rassign(var, psi, dist))
            case ObserveLabel(cond):
                return Outcome(select(cond, dist))
            case BranchLabel(cond):
                parts = (select(cond, dist), select(Not(cond), dist))
                outcomes: list[Outcome] = []
                for succ, part, loops_back in zip(
                    self.graph.successors_of(source),
                    parts,
                    self.analysis.loops_back[source],
                    strict=True,
                ):
                    # an edge closing a loop is evaluated with ω_{k-1}
                    level = k - 1 if loops_back else k
                    outcomes.append((yield (level, succ, target, part)))
                return Outcome(
                    add_all(dist.universe, [outcome.dist for outcome in outcomes]),
                    merge_frontiers(outcome.frontier for outcome in outcomes),
                )
        raise TypeError(f"Node {source} cannot be evaluated: {self.graph.label(source)!r}")
