from fractions import Fraction

import pytest

from desire_kernel.core.assessment import (
    CredalSet,
    GambleAssessment,
    OptionSet,
    OptionSetAssessment,
)
from desire_kernel.core.errors import EmptyOptionSetError, SpaceMismatchError
from desire_kernel.core.gamble import SpaceSpec
from tests.fixtures.models import XY, gamble, option_set


def test_option_sets_are_canonical() -> None:
    first = option_set([1, 0], [0, 1], [1, 0])
    second = option_set([0, 1], [1, 0])
    assert first == second
    assert len(first) == 2
    assert first.gambles[0] == gamble(0, 1)


def test_assessments_sort_and_deduplicate_sets() -> None:
    a = option_set([1, -1])
    b = option_set([-1, 1])
    assert OptionSetAssessment(XY, (a, b, a)) == OptionSetAssessment(XY, (b, a))


def test_assessment_sets_share_its_space() -> None:
    other = SpaceSpec(("a", "b"))
    with pytest.raises(SpaceMismatchError):
        OptionSetAssessment(XY, (OptionSet.of(other, [1, 0]),))


def test_empty_option_set_is_allowed_but_detected() -> None:
    empty = OptionSet(XY)
    assert empty.is_empty()
    assert OptionSetAssessment(XY, (empty,)).has_empty_set()
    with pytest.raises(EmptyOptionSetError):
        empty.require_non_empty("B")


def test_lift_builds_singletons() -> None:
    lifted = GambleAssessment(XY, (gamble(-1, 2), gamble(1, 0))).lift()
    assert [len(option_set) for option_set in lifted] == [1, 1]


def test_credal_set_expectations() -> None:
    credal = CredalSet(XY, (gamble(1, 0), gamble(0, 1)))
    assert credal.lower_expectation(gamble(1, -1)) == -1
    assert credal.upper_expectation(gamble(1, -1)) == 1
    single = CredalSet(XY, (gamble("1/2", "1/2"),))
    assert single.lower_expectation(gamble(1, 0)) == Fraction(1, 2)


def test_credal_set_checks_its_vertices() -> None:
    with pytest.raises(ValueError, match="not normalized"):
        CredalSet(XY, (gamble("1/2", "1/3"),))
    with pytest.raises(ValueError, match="negative mass"):
        CredalSet(XY, (gamble(2, -1),))
    with pytest.raises(EmptyOptionSetError):
        CredalSet(XY, ())
