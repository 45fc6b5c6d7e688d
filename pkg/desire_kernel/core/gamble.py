"""Gambles on a finite possibility space and the background vector orderings."""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import Any

from desire_kernel.core.errors import SpaceMismatchError
from desire_kernel.core.rational import ZERO, format_rational, parse_rational


@dataclass(frozen=True)
class SpaceSpec:
    """The finite possibility space; atom order fixes coordinate positions."""

    atoms: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("possibility space must have at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError(f"duplicate atom labels in space {list(self.atoms)}")

    def __len__(self) -> int:
        return len(self.atoms)

    def gamble(self, *values: Any) -> "Gamble":
        """Build a gamble from integers, Fractions or `"p/q"` strings."""
        return Gamble(tuple(parse_rational(v) for v in values), self)

    def constant(self, mu: Fraction | int) -> "Gamble":
        """The constant gamble mu·1."""
        return Gamble((Fraction(mu),) * len(self.atoms), self)

    def zero(self) -> "Gamble":
        return self.constant(0)


@dataclass(frozen=True)
class Gamble:
    coords: tuple[Fraction, ...]
    space: SpaceSpec

    def __post_init__(self) -> None:
        if len(self.coords) != len(self.space):
            raise SpaceMismatchError(
                f"gamble has {len(self.coords)} coordinates, "
                f"space has {len(self.space)} atoms"
            )

    def _check_same_space(self, other: "Gamble") -> None:
        if other.space != self.space:
            raise SpaceMismatchError(
                f"gambles live on different spaces: "
                f"{list(self.space.atoms)} vs {list(other.space.atoms)}"
            )

    def __add__(self, other: "Gamble") -> "Gamble":
        self._check_same_space(other)
        return Gamble(
            tuple(a + b for a, b in zip(self.coords, other.coords)), self.space
        )

    def __sub__(self, other: "Gamble") -> "Gamble":
        self._check_same_space(other)
        return Gamble(
            tuple(a - b for a, b in zip(self.coords, other.coords)), self.space
        )

    def __neg__(self) -> "Gamble":
        return Gamble(tuple(-a for a in self.coords), self.space)

    def __mul__(self, scalar: Fraction | int) -> "Gamble":
        return Gamble(tuple(scalar * a for a in self.coords), self.space)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def dot(self, weights: Sequence[Fraction]) -> Fraction:
        """Exact expectation of this gamble under a mass vector."""
        if len(weights) != len(self.coords):
            raise SpaceMismatchError(
                f"weight vector has {len(weights)} entries, "
                f"gamble has {len(self.coords)}"
            )
        return sum((w * a for w, a in zip(weights, self.coords)), ZERO)

    def inf(self) -> Fraction:
        return min(self.coords)

    def to_strings(self) -> list[str]:
        return [format_rational(a) for a in self.coords]

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_strings()) + ")"


def gamble_sort_key(u: Gamble) -> tuple[Fraction, ...]:
    """Canonical (lexicographic) order of gambles inside option sets."""
    return u.coords


def check_same_space(space: SpaceSpec, gambles: Iterable[Gamble]) -> None:
    for u in gambles:
        if u.space != space:
            raise SpaceMismatchError(
                f"gamble {u} lives on {list(u.space.atoms)}, "
                f"expected {list(space.atoms)}"
            )


class BackgroundOrdering(StrEnum):
    """The a-priori strict ordering deciding u ≻ 0."""

    NONNEG = "nonneg"
    STRICT = "strict"

    def dominates(self, u: Gamble) -> bool:
        """Decide u ≻ 0."""
        if self is BackgroundOrdering.STRICT:
            return all(a > 0 for a in u.coords)
        return all(a >= 0 for a in u.coords) and not u.is_zero()

    def non_positive(self, u: Gamble) -> bool:
        """Decide u ≼ 0, that is u = 0 or -u ≻ 0."""
        return u.is_zero() or self.dominates(-u)


def gamble_add(u: Gamble, v: Gamble) -> Gamble:
    return u + v


def gamble_sub(u: Gamble, v: Gamble) -> Gamble:
    return u - v


def gamble_scale(scalar: Fraction | int, u: Gamble) -> Gamble:
    return u * scalar


def dominates_background(u: Gamble, ordering: BackgroundOrdering) -> bool:
    return ordering.dominates(u)
