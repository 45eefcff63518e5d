import logging
from collections.abc import Generator
from fractions import Fraction

from pcfg_engine.denotational.models import (
    ONE,
    ConstantExpectation,
    Expectation,
    FunctionExpectation,
    LoopIterate,
    LoopLimit,
    NormalizedResult,
    RawResult,
    ReturnValue,
    Transformed,
    Valuation,
    weighted_sum,
)
from pcfg_engine.errors import NegativeExpectationError, NormalizationUndefinedError
from pcfg_engine.fixpoint_semantics import (
    ConvergenceReport,
    SemanticsOptions,
    merge_reports,
    settled,
)
from pcfg_engine.store_dist import Store
from pcfg_engine.syntax import (
    Assign,
    BoolConst,
    BoolExpr,
    If,
    Observe,
    Program,
    RandomAssign,
    Seq,
    Skip,
    Stmt,
    While,
    eval_bool,
    eval_expr,
    uninitialised_reads,
)

logger = logging.getLogger(__name__)

type Request = tuple[Expectation, Store]
type Unfolding = Generator[Request, Valuation, Valuation]

_ZERO = Valuation(Fraction(0))


class ExpectationEvaluator:
    """Evaluates expectation transformers pointwise.

    Like the operational engine, every rule is a generator over the
    sub-values it needs, driven from an explicit stack. The memo and the
    collected loop reports live as long as the evaluator, so use one
    evaluator per query.
    """

    def __init__(self, options: SemanticsOptions | None = None) -> None:
        self.options = options or SemanticsOptions()
        self._memo: dict[Request, Valuation] = {}
        self._reports: list[ConvergenceReport] = []

    def expect(self, stmt: Stmt, post: Expectation, store: Store) -> Fraction:
        """``(⟦stmt⟧ post)(store)``."""
        return self.evaluate(Transformed(stmt, post), store).value

    def value(self, expectation: Expectation, store: Store) -> Fraction:
        return self.evaluate(expectation, store).value

    def report(self) -> ConvergenceReport:
        """Summary of every loop limit evaluated so far."""
        return merge_reports(self._reports, self.options.tol)

    def evaluate(self, expectation: Expectation, store: Store) -> Valuation:
        request = (expectation, store)
        result = self._shortcut(request) or self._memo.get(request)
        if result is not None:
            return result

        stack: list[tuple[Request, Unfolding]] = [(request, self._unfold(*request))]
        incoming: Valuation | None = None
        while stack:
            current, unfolding = stack[-1]
            try:
                needed = unfolding.send(incoming)  # type: ignore[arg-type]
            except StopIteration as stop:
                stack.pop()
                incoming = stop.value
                self._memo[current] = stop.value
                continue

            incoming = self._shortcut(needed) or self._memo.get(needed)
            if incoming is None:
                stack.append((needed, self._unfold(*needed)))

        if incoming is None:
            raise AssertionError("evaluation stack finished without a result")
        return incoming

    def _shortcut(self, request: Request) -> Valuation | None:
        expectation, store = request
        match expectation:
            case ConstantExpectation(value):
                return Valuation(value)
            case ReturnValue(expr, clamp):
                value = eval_expr(expr, store)
                if value < 0:
                    if not clamp:
                        raise NegativeExpectationError(value, store)
                    return _ZERO
                return Valuation(Fraction(value))
            case FunctionExpectation(function, name):
                result = Fraction(function(store))
                if result < 0:
                    raise ValueError(f"Expectation {name or function!r} is negative at {store}")
                return Valuation(result)
            case LoopIterate(loop, post, 0):
                return Valuation(Fraction(0), {(loop, post, store): Fraction(1)})
        return None

    def _unfold(self, expectation: Expectation, store: Store) -> Unfolding:
        match expectation:
            case Transformed(stmt, post):
                return (yield from self._transform(stmt, post, store))
            case LoopIterate(loop, post, k):
                if eval_bool(loop.cond, store):
                    return (yield (Transformed(loop.body, LoopIterate(loop, post, k - 1)), store))
                return (yield (post, store))
            case LoopLimit(loop, post):
                return (yield from self._limit(loop, post, store))
        raise TypeError(f"Unsupported expectation: {expectation!r}")

    def _transform(self, stmt: Stmt, post: Expectation, store: Store) -> Unfolding:
        match stmt:
            case Skip():
                return (yield (post, store))
            case Assign(var, expr):
                return (yield (post, store.update(var, eval_expr(expr, store))))
            case RandomAssign(var, psi):
                parts: list[tuple[Fraction, Valuation]] = []
                for value, probability in psi.outcomes:
                    parts.append((probability, (yield (post, store.update(var, value)))))
                return weighted_sum(parts)
            case Observe(cond):
                if not eval_bool(cond, store):
                    return _ZERO
                return (yield (post, store))
            case Seq(first, second):
                return (yield (Transformed(first, Transformed(second, post)), store))
            case If(cond, then, orelse):
                branch = then if eval_bool(cond, store) else orelse
                return (yield (Transformed(branch, post), store))
            case While():
                return (yield (LoopLimit(stmt, post), store))
        raise TypeError(f"Unsupported statement: {stmt!r}")

    def _limit(self, loop: While, post: Expectation, store: Store) -> Unfolding:
        tol = self.options.tol
        max_k = self.options.max_k
        previous = Valuation(Fraction(0), {(loop, post, store): Fraction(1)})
        for k in range(1, max_k + 1):
            current = yield (LoopIterate(loop, post, k), store)
            delta = current.value - previous.value
            residual = current.residual
            exact = residual == 0
            converged = exact or (abs(delta) <= tol and residual <= tol) or settled(
                abs(delta), current.frontier_delta(previous), previous.residual, residual, tol
            )
            if converged or k == max_k:
                self._reports.append(
                    ConvergenceReport(
                        iterations_used=k,
                        mass_delta=delta,
                        sup_delta=abs(delta),
                        residual_mass=residual,
                        tolerance=tol,
                        converged=converged,
                        certified=exact,
                        exact=exact,
                        budget_exhausted=not converged,
                    )
                )
                if not converged:
                    logger.warning(
                        "Loop limit at %s exhausted its budget of %d iterations", store, k
                    )
                else:
                    logger.debug("Loop limit at %s converged after %d iterations", store, k)
                return current
            previous = current
        raise AssertionError("unreachable: max_k >= 1")


def expect(
    stmt: Stmt,
    post: Expectation,
    store: Store,
    options: SemanticsOptions | None = None,
) -> tuple[Fraction, ConvergenceReport]:
    """``(⟦stmt⟧ post)(store)`` and how its loops were approximated."""
    evaluator = ExpectationEvaluator(options)
    value = evaluator.expect(stmt, post, store)
    return value, evaluator.report()


def loop_iterate(
    loop: While,
    post: Expectation,
    k: int,
    store: Store,
    options: SemanticsOptions | None = None,
) -> Fraction:
    """``F_k(store)`` for ``loop``, computed directly from the loop rule."""
    if k < 0:
        raise ValueError(f"Iteration count must be non-negative, got {k}")
    return ExpectationEvaluator(options).value(LoopIterate(loop, post, k), store)


def unrolled_while(cond: BoolExpr, body: Stmt, k: int) -> Stmt:
    """``while⟨k⟩``: ``k`` nested conditionals ending in ``observe(false)``."""
    if k < 0:
        raise ValueError(f"Unrolling depth must be non-negative, got {k}")
    unrolled: Stmt = Observe(BoolConst(False))
    for _ in range(k):
        unrolled = If(cond, Seq(body, unrolled), Skip())
    return unrolled


def raw_semantics(program: Program, options: SemanticsOptions | None = None) -> RawResult:
    """Expected return value and acceptance probability from the all-zeros store."""
    unset = uninitialised_reads(program)
    if unset:
        logger.warning(
            "Variables may be read before assignment, the result depends on the "
            "initial store: %s",
            ", ".join(unset),
        )

    evaluator = ExpectationEvaluator(options)
    bottom = Store.bottom(program.universe)
    numerator = evaluator.expect(program.body, ReturnValue(program.return_expr), bottom)
    denominator = evaluator.expect(program.body, ONE, bottom)
    report = evaluator.report()
    return RawResult(
        numerator=numerator,
        denominator=denominator,
        converged=report.converged,
        iterations=report.iterations_used,
        report=report,
    )


def normalized_semantics(
    program: Program, options: SemanticsOptions | None = None
) -> NormalizedResult:
    """Expected return value conditioned on acceptance.

    Raises:
        NormalizationUndefinedError: the acceptance probability is 0.
    """
    raw = raw_semantics(program, options)
    if raw.denominator == 0:
        raise NormalizationUndefinedError(raw.numerator, raw.denominator)
    return NormalizedResult(
        value=raw.numerator / raw.denominator,
        numerator=raw.numerator,
        denominator=raw.denominator,
        converged=raw.converged,
        iterations=raw.iterations,
        report=raw.report,
    )
