import logging
from fractions import Fraction

from pcfg_engine.adequacy.models import AdequacyResult
from pcfg_engine.denotational import Expectation, ExpectationEvaluator
from pcfg_engine.errors import UserInputError
from pcfg_engine.fixpoint_semantics import SemanticsEngine, SemanticsOptions
from pcfg_engine.graph_analysis import AnalysisOptions
from pcfg_engine.store_dist import Dist, Store, is_concentrated, pair
from pcfg_engine.syntax import Stmt, contains_loop, is_deterministic_stmt
from pcfg_engine.translate import translate_stmt

logger = logging.getLogger(__name__)


def check_adequacy(
    stmt: Stmt,
    post: Expectation,
    dist: Dist,
    options: SemanticsOptions | None = None,
    analysis_options: AnalysisOptions | None = None,
) -> AdequacyResult:
    """Compare ``Σ (⟦stmt⟧post)(s)·D(s)`` with ``Σ post(s′)·ω(Start, End)(D)(s′)``.

    Loop-free statements, and loops whose limits were reached exactly on
    both sides, must agree exactly. Otherwise the difference may be at most
    ``tol · max(1, max post) · (|supp D| + |supp D′| + 1)``.
    """
    options = options or SemanticsOptions()
    graph = translate_stmt(stmt, dist.universe)
    engine = SemanticsEngine(graph, options, analysis_options)
    result, operational = engine.run_graph(dist)

    evaluator = ExpectationEvaluator(options)
    lhs = pair(lambda store: evaluator.expect(stmt, post, store), dist)
    denotational = evaluator.report()
    post_values = {store: evaluator.value(post, store) for store in result.support}
    rhs = pair(post_values.__getitem__, result)

    abs_diff = abs(lhs - rhs)
    exact = not contains_loop(stmt) or (operational.exact and denotational.exact)
    both_converged = operational.converged and denotational.converged
    if exact:
        slack = Fraction(0)
    else:
        largest = max(post_values.values(), default=Fraction(0))
        slack = options.tol * max(Fraction(1), largest) * (len(dist) + len(result) + 1)
    passed = abs_diff <= slack and (exact or both_converged)
    if not passed:
        logger.warning("Adequacy check failed: lhs %s, rhs %s", lhs, rhs)

    return AdequacyResult(
        lhs=lhs,
        rhs=rhs,
        abs_diff=abs_diff,
        slack=slack,
        exact=exact,
        both_converged=both_converged,
        passed=passed,
        operational=operational,
        denotational=denotational,
    )


def retrieve_expectation(
    stmt: Stmt,
    post: Expectation,
    store: Store,
    options: SemanticsOptions | None = None,
    analysis_options: AnalysisOptions | None = None,
) -> Fraction:
    """``(⟦stmt⟧post)(store)`` computed from the pCFG side only."""
    graph = translate_stmt(stmt, store.universe)
    result, _ = SemanticsEngine(graph, options, analysis_options).run_graph(Dist.point(store))
    evaluator = ExpectationEvaluator(options)
    return pair(lambda final: evaluator.value(post, final), result)


def deterministic_outcome(
    stmt: Stmt,
    store: Store,
    options: SemanticsOptions | None = None,
    analysis_options: AnalysisOptions | None = None,
) -> Store | None:
    """The end store a deterministic statement reaches from ``store``, or None
    if it does not terminate."""
    if not is_deterministic_stmt(stmt):
        raise UserInputError("Statement uses random assignment or observe")
    graph = translate_stmt(stmt, store.universe)
    result, _ = SemanticsEngine(graph, options, analysis_options).run_graph(Dist.point(store))
    concentration = is_concentrated(result)
    if not concentration.concentrated:
        raise AssertionError(f"Deterministic statement produced {result}")
    return concentration.witness
