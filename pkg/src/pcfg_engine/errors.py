"""Exception hierarchy.

Every error raised on purpose by the engine is a ``ValueError`` subclass.
``UserInputError`` covers malformed programs, graphs and queries;
``SemanticError`` covers failures that only show up while evaluating a
well-formed input.
"""

from collections.abc import Sequence
from fractions import Fraction
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from pcfg_engine.pcfg.models import Violation
    from pcfg_engine.store_dist.models import Store


class PcfgEngineError(ValueError):
    """Base class for all engine errors."""


class UserInputError(PcfgEngineError):
    pass


class SemanticError(PcfgEngineError):
    pass


class ProgramSyntaxError(UserInputError):
    def __init__(
        self, message: str, line: int | None = None, column: int | None = None
    ) -> None:
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)

    def __reduce__(self) -> tuple[Any, ...]:
        return (_rebuild, (type(self), str(self), {"line": self.line, "column": self.column}))


class DeclarationError(UserInputError):
    pass


class UndeclaredVariableError(DeclarationError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Variable '{name}' is not declared")


class DistSpecError(UserInputError):
    pass


class DocumentFormatError(UserInputError):
    """A JSON document (graph or distribution) could not be loaded."""


class GraphFormatError(DocumentFormatError):
    def __init__(self, message: str, violations: "Sequence[Violation]" = ()) -> None:
        self.violations = tuple(violations)
        if self.violations:
            details = "; ".join(violation.message for violation in self.violations)
            message = f"{message}: {details}"
        super().__init__(message)

    def __reduce__(self) -> tuple[Any, ...]:
        return (_rebuild, (type(self), str(self), {"violations": self.violations}))


class GraphQueryError(UserInputError):
    pass


class NotPostdominatedError(GraphQueryError):
    def __init__(self, source: int, target: int) -> None:
        self.source = source
        self.target = target
        super().__init__(f"Node {target} does not postdominate node {source}")


class PrecedenceError(GraphQueryError):
    pass


class GraphTooLargeError(GraphQueryError):
    def __init__(self, node_count: int, limit: int) -> None:
        self.node_count = node_count
        self.limit = limit
        super().__init__(
            f"Path enumeration refused: graph has {node_count} nodes, limit is {limit}"
        )


class EvaluationError(SemanticError):
    """Raised for division by zero inside an expression."""


class NormalizationUndefinedError(SemanticError):
    def __init__(self, numerator: Fraction, denominator: Fraction) -> None:
        self.numerator = numerator
        self.denominator = denominator
        super().__init__(
            f"Normalization undefined: numerator {numerator}, denominator {denominator}"
        )


class NegativeExpectationError(SemanticError):
    def __init__(self, value: int, store: "Store") -> None:
        self.value = value
        self.store = store
        super().__init__(f"Return expression is negative ({value}) at store {store}")

    def __reduce__(self) -> tuple[Any, ...]:
        return (type(self), (self.value, self.store))


class NonConvergenceError(SemanticError):
    pass


def _rebuild(cls: type[Exception], message: str, state: dict[str, Any]) -> Exception:
    # process pools pickle exceptions raised in workers
    error = cls.__new__(cls)
    Exception.__init__(error, message)
    error.__dict__.update(state)
    return error
