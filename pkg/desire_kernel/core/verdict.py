from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from desire_kernel.services.choice.certificate import Certificate


class Unbounded(Enum):
    """Marker for an optimum that is +∞ (inconsistent generators)."""

    UNBOUNDED = "unbounded"

    def __str__(self) -> str:
        return self.value


UNBOUNDED = Unbounded.UNBOUNDED

Bound = Fraction | Unbounded


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer together with the evidence that supports it.

    `selections` counts the selection branches that were examined; it is the
    deterministic work counter the CLI reports.
    """

    answer: bool
    certificate: "Certificate"
    selections: int = 0

    def __bool__(self) -> bool:
        return self.answer


@dataclass(frozen=True)
class MarginResult:
    """Supremum of ε with B - ε·1 entailed, and whether that supremum is reached."""

    value: Bound
    attained: bool
    selections: int = 0

    @property
    def archimedean(self) -> bool:
        return self.value is UNBOUNDED or self.value > 0
