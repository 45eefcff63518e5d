"""One-step semantic operators on distributions.

All operators are additive and multiplicative in the distribution argument.
``apply_assign`` and ``apply_rassign`` preserve mass; ``select`` never
increases it.
"""

from collections.abc import Callable
from fractions import Fraction

from pcfg_engine.errors import DocumentFormatError
from pcfg_engine.store_dist.models import Concentration, Dist, DistDocument, Store
from pcfg_engine.syntax import BoolExpr, DistSpec, Expr, eval_bool, eval_expr


def _check_universe(left: Dist, right: Dist) -> None:
    if left.universe != right.universe:
        raise ValueError(
            f"Distributions range over different universes: "
            f"{left.universe} and {right.universe}"
        )


def mass(dist: Dist) -> Fraction:
    """``‖D‖``: total weight of the support."""
    return dist.mass


def add(left: Dist, right: Dist) -> Dist:
    _check_universe(left, right)
    if not right:
        return left
    if not left:
        return right
    return Dist.from_weights(left.universe, [*left.entries, *right.entries])


def add_all(universe: tuple[str, ...], dists: list[Dist]) -> Dist:
    nonzero = [dist for dist in dists if dist]
    if len(nonzero) == 1:
        return nonzero[0]
    for dist in nonzero:
        if dist.universe != universe:
            raise ValueError(f"Distribution does not range over {universe}")
    return Dist.from_weights(universe, [entry for dist in nonzero for entry in dist.entries])


def scale(factor: Fraction | int, dist: Dist) -> Dist:
    factor = Fraction(factor)
    if factor < 0:
        raise ValueError(f"Scaling factor must be non-negative, got {factor}")
    if factor == 1:
        return dist
    return Dist.from_weights(
        dist.universe, [(store, factor * weight) for store, weight in dist.entries]
    )


def is_concentrated(dist: Dist) -> Concentration:
    if not dist:
        return Concentration(concentrated=True)
    if len(dist) == 1:
        return Concentration(concentrated=True, witness=dist.entries[0][0])
    return Concentration(concentrated=False)


def select(cond: BoolExpr, dist: Dist) -> Dist:
    """Keep exactly the stores that satisfy ``cond``."""
    kept = tuple((store, weight) for store, weight in dist.entries if eval_bool(cond, store))
    if len(kept) == len(dist):
        return dist
    # filtering keeps the canonical order
    return Dist(dist.universe, kept)


def apply_assign(var: str, expr: Expr, dist: Dist) -> Dist:
    return Dist.from_weights(
        dist.universe,
        [(store.update(var, eval_expr(expr, store)), weight) for store, weight in dist.entries],
    )


def apply_rassign(var: str, psi: DistSpec, dist: Dist) -> Dist:
    return Dist.from_weights(
        dist.universe,
        [
            (store.update(var, value), probability * weight)
            for store, weight in dist.entries
            for value, probability in psi.outcomes
        ],
    )


def pair(expectation: Callable[[Store], Fraction], dist: Dist) -> Fraction:
    """``Σ_s F(s)·D(s)``."""
    return sum((expectation(store) * weight for store, weight in dist.entries), Fraction(0))


def dump_dist(dist: Dist) -> str:
    """Canonical compact JSON, byte-stable for equal distributions."""
    return DistDocument.from_dist(dist).model_dump_json()


def load_dist(text: str) -> Dist:
    try:
        return DistDocument.model_validate_json(text).to_dist()
    except ValueError as e:
        raise DocumentFormatError(f"Invalid distribution document: {e}") from e
