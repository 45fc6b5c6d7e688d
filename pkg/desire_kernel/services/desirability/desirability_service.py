import logging
from dataclasses import dataclass, field
from fractions import Fraction

from injector import inject, singleton

from desire_kernel.components.cone.cone_component import ConeComponent, ConeWitness
from desire_kernel.core.assessment import CredalSet, GambleAssessment, OptionSet
from desire_kernel.core.errors import InconsistentAssessmentError
from desire_kernel.core.gamble import Gamble, check_same_space
from desire_kernel.core.verdict import UNBOUNDED

logger = logging.getLogger(__name__)

# marks models whose consistency natural_extension has already decided
_CHECKED = object()


@dataclass(frozen=True)
class DesirabilityModel:
    """The natural extension posi(V≻0 ∪ G) of a consistent generator set G.

    Build it through `DesirabilityService.natural_extension`. A model built
    directly is re-checked each time a service method uses it.
    """

    generators: GambleAssessment
    _origin: object = field(default=None, repr=False, compare=False)


@singleton
class DesirabilityService:
    """Binary inference on sets of desirable gambles and credal sets."""

    @inject
    def __init__(self, cone_component: ConeComponent) -> None:
        self.cone = cone_component

    def d_consistent(self, assessment: GambleAssessment) -> bool:
        return self.cone.cone_consistent(assessment)

    def natural_extension(self, assessment: GambleAssessment) -> DesirabilityModel:
        self._require_consistent(assessment)
        return DesirabilityModel(assessment, _CHECKED)

    def _require_consistent(self, assessment: GambleAssessment) -> None:
        if not self.d_consistent(assessment):
            raise InconsistentAssessmentError(
                f"generators {[str(g) for g in assessment]} are inconsistent: "
                "0 is a positive combination"
            )

    def _checked(self, model: DesirabilityModel) -> DesirabilityModel:
        """Return a model known to be consistent.

        Raises:
            InconsistentAssessmentError: if the generators are inconsistent.
        """
        if model._origin is _CHECKED:
            return model
        return self.natural_extension(model.generators)

    def d_entails(self, model: DesirabilityModel, f: Gamble) -> ConeWitness | None:
        """Decide f ∈ D; the zero gamble is never desirable."""
        model = self._checked(model)
        check_same_space(model.generators.space, (f,))
        if f.is_zero():
            return None
        return self.cone.cone_contains(model.generators, f)

    def binary_accepts(self, model: DesirabilityModel, options: OptionSet) -> bool:
        """Decide B ∩ D ≠ ∅, membership of B in the binary model built from D."""
        model = self._checked(model)
        return any(self.d_entails(model, b) is not None for b in options)

    def d_maximality_choice(
        self, model: DesirabilityModel, options: OptionSet
    ) -> OptionSet:
        """Options u with no v in A such that v - u ∈ D."""
        options.require_non_empty("A")
        model = self._checked(model)
        chosen = tuple(
            u
            for u in options
            if not any(
                v != u and self.d_entails(model, v - u) is not None for v in options
            )
        )
        logger.debug("Maximality kept %s of %s options", len(chosen), len(options))
        return OptionSet(options.space, chosen)

    def lowprev_from_model(self, model: DesirabilityModel, f: Gamble) -> Fraction:
        model = self._checked(model)
        value = self.cone.lower_prevision(model.generators, f)
        if value is UNBOUNDED:
            raise InconsistentAssessmentError(
                "lower prevision is unbounded: the generators are inconsistent"
            )
        return value

    def upper_prevision(self, model: DesirabilityModel, f: Gamble) -> Fraction:
        """Conjugate upper prevision -P(-f)."""
        return -self.lowprev_from_model(model, -f)

    @staticmethod
    def strict_desirable_under_lowprev(credal: CredalSet, f: Gamble) -> bool:
        """Decide min over conv(M) of P(f) > 0, exactly at the vertices."""
        check_same_space(credal.space, (f,))
        return credal.lower_expectation(f) > 0

    def credal_maximality_choice(
        self, credal: CredalSet, options: OptionSet
    ) -> OptionSet:
        """Maximality for the lower envelope of conv(M).

        u is dropped when some v in S has a strictly positive lower
        expectation for v - u.
        """
        options.require_non_empty("S")
        chosen = tuple(
            u
            for u in options
            if not any(
                self.strict_desirable_under_lowprev(credal, v - u) for v in options
            )
        )
        return OptionSet(options.space, chosen)
