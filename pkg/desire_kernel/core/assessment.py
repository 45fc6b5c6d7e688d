"""Option sets, assessments and credal sets.

All types are immutable and canonical: gambles inside an option set are
deduplicated and sorted lexicographically, and assessments sort their option
sets, so selection enumeration and certificates are reproducible.
"""
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction

from desire_kernel.core.errors import EmptyOptionSetError, SpaceMismatchError
from desire_kernel.core.gamble import (
    BackgroundOrdering,
    Gamble,
    SpaceSpec,
    check_same_space,
    gamble_sort_key,
)
from desire_kernel.core.rational import ONE


def _canonical(gambles: Iterable[Gamble]) -> tuple[Gamble, ...]:
    return tuple(sorted(set(gambles), key=gamble_sort_key))


@dataclass(frozen=True)
class OptionSet:
    """A finite set of gambles. May be empty."""

    space: SpaceSpec
    gambles: tuple[Gamble, ...] = ()

    def __post_init__(self) -> None:
        check_same_space(self.space, self.gambles)
        object.__setattr__(self, "gambles", _canonical(self.gambles))

    @staticmethod
    def of(space: SpaceSpec, *rows: Iterable[object]) -> "OptionSet":
        """Build from coordinate rows: `OptionSet.of(space, [1, -1], ["1/2", 0])`."""
        return OptionSet(space, tuple(space.gamble(*row) for row in rows))

    def __iter__(self) -> Iterator[Gamble]:
        return iter(self.gambles)

    def __len__(self) -> int:
        return len(self.gambles)

    def __contains__(self, u: object) -> bool:
        return u in self.gambles

    def is_empty(self) -> bool:
        return not self.gambles

    def require_non_empty(self, what: str = "option set") -> "OptionSet":
        if not self.gambles:
            raise EmptyOptionSetError(f"{what} must not be empty")
        return self

    def without(self, u: Gamble) -> "OptionSet":
        return OptionSet(self.space, tuple(v for v in self.gambles if v != u))

    def with_gambles(self, *extra: Gamble) -> "OptionSet":
        return OptionSet(self.space, self.gambles + extra)

    def issubset(self, other: "OptionSet") -> bool:
        return set(self.gambles) <= set(other.gambles)

    def sort_key(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(u.coords for u in self.gambles)

    def __str__(self) -> str:
        return "{" + ", ".join(str(u) for u in self.gambles) + "}"


def _canonical_sets(sets: Iterable[OptionSet]) -> tuple[OptionSet, ...]:
    return tuple(sorted(set(sets), key=OptionSet.sort_key))


@dataclass(frozen=True)
class OptionSetAssessment:
    """A finite family of option sets, each asserted to contain a desirable option."""

    space: SpaceSpec
    sets: tuple[OptionSet, ...] = ()
    ordering: BackgroundOrdering = BackgroundOrdering.NONNEG

    def __post_init__(self) -> None:
        for option_set in self.sets:
            if option_set.space != self.space:
                raise SpaceMismatchError(
                    f"option set {option_set} lives on another space"
                )
        object.__setattr__(self, "sets", _canonical_sets(self.sets))

    def __iter__(self) -> Iterator[OptionSet]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def has_empty_set(self) -> bool:
        return any(option_set.is_empty() for option_set in self.sets)


@dataclass(frozen=True)
class GambleAssessment:
    """A finite set of gambles, each asserted desirable."""

    space: SpaceSpec
    gambles: tuple[Gamble, ...] = ()
    ordering: BackgroundOrdering = BackgroundOrdering.NONNEG

    def __post_init__(self) -> None:
        check_same_space(self.space, self.gambles)
        object.__setattr__(self, "gambles", _canonical(self.gambles))

    def __iter__(self) -> Iterator[Gamble]:
        return iter(self.gambles)

    def __len__(self) -> int:
        return len(self.gambles)

    def with_gambles(self, *extra: Gamble) -> "GambleAssessment":
        return GambleAssessment(self.space, self.gambles + extra, self.ordering)

    def lift(self) -> OptionSetAssessment:
        """The option-set assessment made of the singletons {g}."""
        return OptionSetAssessment(
            self.space,
            tuple(OptionSet(self.space, (g,)) for g in self.gambles),
            self.ordering,
        )


@dataclass(frozen=True)
class CredalSet:
    """Convex hull of finitely many probability mass functions."""

    space: SpaceSpec
    vertices: tuple[Gamble, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.vertices:
            raise EmptyOptionSetError("credal set needs at least one vertex")
        check_same_space(self.space, self.vertices)
        for vertex in self.vertices:
            check_mass_function(vertex)
        object.__setattr__(self, "vertices", _canonical(self.vertices))

    def __iter__(self) -> Iterator[Gamble]:
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def expectations(self, f: Gamble) -> list[Fraction]:
        return [f.dot(vertex.coords) for vertex in self.vertices]

    def lower_expectation(self, f: Gamble) -> Fraction:
        """Lower envelope of conv(M) at f; the minimum sits at a vertex."""
        return min(self.expectations(f))

    def upper_expectation(self, f: Gamble) -> Fraction:
        return max(self.expectations(f))


def check_mass_function(vertex: Gamble) -> None:
    """Raise ValueError unless the vertex is a normalized, non-negative mass vector."""
    if any(p < 0 for p in vertex.coords):
        raise ValueError(f"vertex {vertex} has a negative mass")
    if sum(vertex.coords) != ONE:
        raise ValueError(f"vertex {vertex} not normalized")
