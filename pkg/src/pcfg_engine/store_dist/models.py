from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from typing import Self

from pydantic import BaseModel, Field, field_validator

from pcfg_engine.rational import Rational


@cache
def _positions(universe: tuple[str, ...]) -> dict[str, int]:
    return {name: index for index, name in enumerate(universe)}


@dataclass(frozen=True)
class Store:
    """A total assignment of integers to the variables of a universe."""

    universe: tuple[str, ...]
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.universe) != len(self.values):
            raise ValueError(
                f"Store over {self.universe} needs {len(self.universe)} values, "
                f"got {len(self.values)}"
            )

    @classmethod
    def bottom(cls, universe: Iterable[str]) -> Self:
        """The all-zeros store."""
        universe = tuple(universe)
        return cls(universe, (0,) * len(universe))

    @classmethod
    def of(cls, universe: Iterable[str], values: Mapping[str, int]) -> Self:
        universe = tuple(universe)
        return cls(universe, tuple(values[name] for name in universe))

    def __getitem__(self, name: str) -> int:
        try:
            return self.values[_positions(self.universe)[name]]
        except KeyError as e:
            raise KeyError(f"Variable '{name}' is not in {self.universe}") from e

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.universe, self.values, strict=True))

    def update(self, name: str, value: int) -> "Store":
        """``s[x ↦ z]``."""
        index = _positions(self.universe)[name]
        values = self.values[:index] + (value,) + self.values[index + 1 :]
        return Store(self.universe, values)

    def __str__(self) -> str:
        body = ", ".join(f"{n}: {v}" for n, v in zip(self.universe, self.values, strict=True))
        return "{" + body + "}"


@dataclass(frozen=True)
class Dist:
    """A finite-support map from stores to positive exact weights.

    Entries are kept sorted by store values and zero weights are dropped, so
    two distributions are equal exactly when their maps are.
    """

    universe: tuple[str, ...]
    entries: tuple[tuple[Store, Fraction], ...] = ()

    def __post_init__(self) -> None:
        previous: tuple[int, ...] | None = None
        for store, weight in self.entries:
            if store.universe != self.universe:
                raise ValueError(f"Store {store} does not range over {self.universe}")
            if weight <= 0:
                raise ValueError(f"Weight of {store} must be positive, got {weight}")
            if previous is not None and store.values <= previous:
                raise ValueError("Distribution entries must be sorted and distinct")
            previous = store.values

    @classmethod
    def zero(cls, universe: Iterable[str]) -> Self:
        return cls(tuple(universe))

    @classmethod
    def point(cls, store: Store, weight: Fraction | int = 1) -> Self:
        return cls.from_weights(store.universe, [(store, Fraction(weight))])

    @classmethod
    def from_weights(
        cls,
        universe: Iterable[str],
        weights: Mapping[Store, Fraction] | Iterable[tuple[Store, Fraction]],
    ) -> Self:
        """Build a canonical distribution, summing duplicate stores."""
        items = weights.items() if isinstance(weights, Mapping) else weights
        totals: dict[Store, Fraction] = {}
        for store, weight in items:
            if weight < 0:
                raise ValueError(f"Weight of {store} must be non-negative, got {weight}")
            totals[store] = totals.get(store, Fraction(0)) + weight
        entries = sorted(
            ((store, weight) for store, weight in totals.items() if weight != 0),
            key=lambda entry: entry[0].values,
        )
        return cls(tuple(universe), tuple(entries))

    @cached_property
    def _weights(self) -> dict[Store, Fraction]:
        return dict(self.entries)

    @cached_property
    def mass(self) -> Fraction:
        return sum((weight for _, weight in self.entries), Fraction(0))

    @cached_property
    def _hash(self) -> int:
        return hash((self.universe, self.entries))

    def __hash__(self) -> int:
        return self._hash

    @property
    def support(self) -> tuple[Store, ...]:
        return tuple(store for store, _ in self.entries)

    def __getitem__(self, store: Store) -> Fraction:
        return self._weights.get(store, Fraction(0))

    def __iter__(self) -> Iterator[tuple[Store, Fraction]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def le(self, other: "Dist") -> bool:
        """Pointwise order: ``self(s) <= other(s)`` for every store."""
        return all(weight <= other[store] for store, weight in self.entries)

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return "{" + ", ".join(f"{store} ↦ {weight}" for store, weight in self.entries) + "}"


@dataclass(frozen=True)
class Concentration:
    """Whether a distribution has at most one store in its support.

    ``witness`` is None for the zero distribution, which is concentrated on
    every store.
    """

    concentrated: bool
    witness: Store | None = None


class DistEntryDocument(BaseModel):
    store: list[int] = Field(..., description="Values in universe order")
    weight: Rational = Field(..., description="Reduced fraction, e.g. '1/16'")

    @field_validator("weight")
    @classmethod
    def validate_weight(cls, weight: Fraction) -> Fraction:
        if weight < 0:
            raise ValueError(f"Weight must be non-negative, got {weight}")
        return weight


class DistDocument(BaseModel):
    """Canonical JSON form of a distribution."""

    universe: list[str] = Field(..., description="Ordered variable names")
    entries: list[DistEntryDocument] = Field(
        default_factory=list, description="Stores sorted lexicographically by value"
    )

    @field_validator("entries")
    @classmethod
    def validate_entries(
        cls, entries: list[DistEntryDocument]
    ) -> list[DistEntryDocument]:
        seen: set[tuple[int, ...]] = set()
        for entry in entries:
            key = tuple(entry.store)
            if key in seen:
                raise ValueError(f"Store {entry.store} appears twice")
            seen.add(key)
        return entries

    @classmethod
    def from_dist(cls, dist: Dist) -> "DistDocument":
        return cls(
            universe=list(dist.universe),
            entries=[
                DistEntryDocument(store=list(store.values), weight=weight)
                for store, weight in dist.entries
            ],
        )

    def to_dist(self) -> Dist:
        universe = tuple(self.universe)
        for entry in self.entries:
            if len(entry.store) != len(universe):
                raise ValueError(
                    f"Store {entry.store} does not match universe {self.universe}"
                )
        return Dist.from_weights(
            universe,
            [(Store(universe, tuple(entry.store)), entry.weight) for entry in self.entries],
        )
