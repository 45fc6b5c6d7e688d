"""Selections: one pick from every assessed option set."""
import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass

from desire_kernel.core.assessment import GambleAssessment, OptionSetAssessment
from desire_kernel.core.errors import EmptyOptionSetError
from desire_kernel.core.gamble import Gamble


@dataclass(frozen=True)
class Selection:
    """`picks[i]` is the position of the chosen gamble inside the i-th assessed set."""

    picks: tuple[int, ...]

    def gambles(self, assessment: OptionSetAssessment) -> tuple[Gamble, ...]:
        return tuple(
            option_set.gambles[pick]
            for option_set, pick in zip(assessment.sets, self.picks)
        )

    def generators(self, assessment: OptionSetAssessment) -> GambleAssessment:
        """The image φ(A) as a generator set."""
        return GambleAssessment(
            assessment.space, self.gambles(assessment), assessment.ordering
        )

    def is_valid_for(self, assessment: OptionSetAssessment) -> bool:
        return len(self.picks) == len(assessment.sets) and all(
            0 <= pick < len(option_set)
            for option_set, pick in zip(assessment.sets, self.picks)
        )


def count_selections(assessment: OptionSetAssessment) -> int:
    return math.prod(len(option_set) for option_set in assessment.sets)


def enumerate_selections(assessment: OptionSetAssessment) -> Iterator[Selection]:
    """All selections, lexicographic in the canonical order of the assessment.

    Raises:
        EmptyOptionSetError: if an assessed set is empty.
    """
    for i, option_set in enumerate(assessment.sets):
        if option_set.is_empty():
            raise EmptyOptionSetError(f"assessed option set {i} is empty")
    ranges = [range(len(option_set)) for option_set in assessment.sets]
    for picks in itertools.product(*ranges):
        yield Selection(tuple(picks))
