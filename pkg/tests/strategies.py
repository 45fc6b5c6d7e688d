"""Hypothesis strategies for gambles, option sets, assessments and credal sets.

Coordinates are small rationals (numerators in -3..3, denominators up to 4) so
that every generated linear program stays tiny and exact.
"""
from fractions import Fraction

from hypothesis import strategies as st

from desire_kernel.core.assessment import (
    CredalSet,
    GambleAssessment,
    OptionSet,
    OptionSetAssessment,
)
from desire_kernel.core.gamble import BackgroundOrdering, Gamble, SpaceSpec

coordinates = st.fractions(min_value=-3, max_value=3, max_denominator=4)
positive_scalars = st.fractions(
    min_value=Fraction(1, 4), max_value=3, max_denominator=4
)
orderings = st.sampled_from(list(BackgroundOrdering))


def space_of(size: int) -> SpaceSpec:
    return SpaceSpec(tuple(f"x{i + 1}" for i in range(size)))


spaces = st.integers(min_value=1, max_value=3).map(space_of)


def gambles(space: SpaceSpec) -> st.SearchStrategy[Gamble]:
    return st.tuples(*[coordinates] * len(space)).map(
        lambda coords: Gamble(coords, space)
    )


def option_sets(
    space: SpaceSpec, min_size: int = 1, max_size: int = 3
) -> st.SearchStrategy[OptionSet]:
    return st.lists(gambles(space), min_size=min_size, max_size=max_size).map(
        lambda members: OptionSet(space, tuple(members))
    )


@st.composite
def gamble_assessments(
    draw: st.DrawFn,
    space: SpaceSpec | None = None,
    max_size: int = 4,
    ordering: BackgroundOrdering | None = None,
) -> GambleAssessment:
    space = space or draw(spaces)
    members = draw(st.lists(gambles(space), max_size=max_size))
    return GambleAssessment(
        space, tuple(members), ordering or BackgroundOrdering.NONNEG
    )


@st.composite
def option_set_assessments(
    draw: st.DrawFn,
    space: SpaceSpec | None = None,
    max_sets: int = 3,
    max_size: int = 3,
    ordering: BackgroundOrdering | None = None,
) -> OptionSetAssessment:
    space = space or draw(spaces)
    sets = draw(st.lists(option_sets(space, max_size=max_size), max_size=max_sets))
    return OptionSetAssessment(
        space, tuple(sets), ordering or BackgroundOrdering.NONNEG
    )


@st.composite
def mass_functions(draw: st.DrawFn, space: SpaceSpec) -> Gamble:
    weights = draw(
        st.lists(
            st.integers(min_value=0, max_value=4),
            min_size=len(space),
            max_size=len(space),
        ).filter(any)
    )
    total = sum(weights)
    return Gamble(tuple(Fraction(w, total) for w in weights), space)


@st.composite
def credal_sets(
    draw: st.DrawFn, space: SpaceSpec | None = None, max_vertices: int = 3
) -> CredalSet:
    space = space or draw(spaces)
    vertices = draw(
        st.lists(mass_functions(space), min_size=1, max_size=max_vertices)
    )
    return CredalSet(space, tuple(vertices))


@st.composite
def dominating_gambles(
    draw: st.DrawFn, space: SpaceSpec, ordering: BackgroundOrdering
) -> Gamble:
    """A gamble u with u ≻ 0 under the ordering."""
    low = Fraction(1, 4) if ordering is BackgroundOrdering.STRICT else Fraction(0)
    coords = draw(
        st.tuples(
            *[st.fractions(min_value=low, max_value=3, max_denominator=4)]
            * len(space)
        ).filter(lambda cs: any(cs))
    )
    return Gamble(coords, space)


def non_negative_gambles(space: SpaceSpec) -> st.SearchStrategy[Gamble]:
    """Gambles v ≥ 0, the zero gamble included."""
    return st.tuples(
        *[st.fractions(min_value=0, max_value=3, max_denominator=4)] * len(space)
    ).map(lambda coords: Gamble(coords, space))
