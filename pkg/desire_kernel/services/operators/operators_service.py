"""Set-level operators on explicitly listed families of option sets.

They serve as transforms for the CLI and as constructors for the property
tests of the closure predicates.
"""
import itertools
import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from injector import inject, singleton

from desire_kernel.components.cone.cone_component import ConeComponent
from desire_kernel.core.assessment import OptionSet, OptionSetAssessment
from desire_kernel.core.errors import FamilyCapExceededError, InvalidCoefficientsError
from desire_kernel.core.gamble import (
    BackgroundOrdering,
    Gamble,
    SpaceSpec,
    check_same_space,
)
from desire_kernel.settings.settings import Settings

logger = logging.getLogger(__name__)

Coefficients = Mapping[tuple[Gamble, Gamble], tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class FiniteFamily:
    """An explicitly enumerated family K of option sets (not a closure)."""

    space: SpaceSpec
    sets: tuple[OptionSet, ...] = ()
    ordering: BackgroundOrdering = BackgroundOrdering.NONNEG

    def __post_init__(self) -> None:
        unique = sorted(set(self.sets), key=OptionSet.sort_key)
        object.__setattr__(self, "sets", tuple(unique))

    @staticmethod
    def from_assessment(assessment: OptionSetAssessment) -> "FiniteFamily":
        return FiniteFamily(assessment.space, assessment.sets, assessment.ordering)

    def __iter__(self) -> Iterator[OptionSet]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __contains__(self, options: object) -> bool:
        return options in self.sets


@singleton
class OperatorsService:
    @inject
    def __init__(self, cone_component: ConeComponent, settings: Settings) -> None:
        self.cone = cone_component
        self.family_cap = settings.engine.family_cap

    @staticmethod
    def translate(options: OptionSet, u: Gamble) -> OptionSet:
        """B - u."""
        check_same_space(options.space, (u,))
        return OptionSet(options.space, tuple(v - u for v in options))

    @staticmethod
    def k3_combine(
        first: OptionSet, second: OptionSet, coefficients: Coefficients
    ) -> OptionSet:
        """{λ_{u,v} u + μ_{u,v} v : u ∈ B1, v ∈ B2} for a full coefficient map.

        Raises:
            InvalidCoefficientsError: on a missing pair, a negative coefficient
                or a pair (0, 0).
        """
        check_same_space(first.space, second)
        combined = []
        for u, v in itertools.product(first, second):
            pair = coefficients.get((u, v))
            if pair is None:
                raise InvalidCoefficientsError(f"missing coefficients for ({u}, {v})")
            lam, mu = pair
            if lam < 0 or mu < 0 or lam + mu == 0:
                raise InvalidCoefficientsError(
                    f"coefficients ({lam}, {mu}) for ({u}, {v}) are not (λ,μ) > 0"
                )
            combined.append(u * lam + v * mu)
        return OptionSet(first.space, tuple(combined))

    @staticmethod
    def rescale(options: OptionSet, scales: Mapping[Gamble, Fraction]) -> OptionSet:
        """{λ_u u : u ∈ B} for strictly positive λ_u."""
        scaled = []
        for u in options:
            scale = scales.get(u)
            if scale is None or scale <= 0:
                raise InvalidCoefficientsError(f"scale for {u} must be positive")
            scaled.append(u * scale)
        return OptionSet(options.space, tuple(scaled))

    @staticmethod
    def replace_dominating(
        options: OptionSet, u: Gamble, w: Gamble, ordering: BackgroundOrdering
    ) -> OptionSet:
        """Swap u ∈ B for a w with w - u ≽ 0."""
        if u not in options:
            raise InvalidCoefficientsError(f"{u} is not a member of {options}")
        difference = w - u
        if not (difference.is_zero() or ordering.dominates(difference)):
            raise InvalidCoefficientsError(f"{w} does not dominate {u}")
        return options.without(u).with_gambles(w)

    def rn_transform(self, family: FiniteFamily) -> FiniteFamily:
        """All B with C minus its members ≼ 0 ⊆ B ⊆ C, for some C in K.

        Raises:
            FamilyCapExceededError: above `engine.family_cap` candidate sets.
        """
        ordering = family.ordering
        removable = [
            [c for c in option_set if ordering.non_positive(c)] for option_set in family
        ]
        size = sum(2 ** len(r) for r in removable)
        if size > self.family_cap:
            logger.warning(
                "Aborting rn_transform: size=%s above cap=%s", size, self.family_cap
            )
            raise FamilyCapExceededError(self.family_cap)
        produced = []
        for option_set, candidates in zip(family, removable):
            for k in range(len(candidates) + 1):
                for dropped in itertools.combinations(candidates, k):
                    kept = tuple(c for c in option_set if c not in dropped)
                    produced.append(OptionSet(family.space, kept))
        return FiniteFamily(family.space, tuple(produced), ordering)

    @staticmethod
    def su_contains(family: FiniteFamily, options: OptionSet) -> bool:
        """Some C in K with C ⊆ B."""
        return any(option_set.issubset(options) for option_set in family)

    @staticmethod
    def rs_contains(family: FiniteFamily, options: OptionSet) -> bool:
        """Some C in K whose members that are not ≼ 0 all lie in B."""
        ordering = family.ordering
        return any(
            all(c in options for c in option_set if not ordering.non_positive(c))
            for option_set in family
        )

    def rp_contains(self, family: FiniteFamily, options: OptionSet) -> bool:
        """Some C in K with B ⊆ C ⊆ posi(B)."""
        options.require_non_empty("B")
        return any(
            options.issubset(option_set) and self.within_posi(options, option_set)
            for option_set in family
        )

    def within_posi(self, options: OptionSet, superset: OptionSet) -> bool:
        """Every member of the superset is a positive combination of B."""
        return all(
            c in options or self.cone.posi_contains(options, c) is not None
            for c in superset
        )

    def within_chull(self, options: OptionSet, superset: OptionSet) -> bool:
        return all(
            c in options or self.cone.chull_contains(options, c) is not None
            for c in superset
        )

    def chull_contains(self, options: OptionSet, f: Gamble) -> bool:
        return self.cone.chull_contains(options, f) is not None
