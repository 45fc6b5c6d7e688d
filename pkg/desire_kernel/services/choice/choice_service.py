import itertools
import logging
import multiprocessing.pool
import os
from collections.abc import Callable, Iterator
from fractions import Fraction
from typing import TypeVar

from injector import inject, singleton

from desire_kernel.components.cone.cone_component import ConeComponent, ConeWitness
from desire_kernel.core.assessment import CredalSet, OptionSet, OptionSetAssessment
from desire_kernel.core.errors import (
    InconsistentAssessmentError,
    NotEntailedError,
    SelectionCapExceededError,
    ZeroGambleError,
)
from desire_kernel.core.gamble import Gamble, check_same_space
from desire_kernel.core.rational import ZERO
from desire_kernel.core.verdict import UNBOUNDED, Bound, MarginResult, Verdict
from desire_kernel.services.choice.certificate import (
    ConsistentCertificate,
    EntailedBranch,
    EntailedCertificate,
    InconsistentBranch,
    InconsistentCertificate,
    NotEntailedCertificate,
)
from desire_kernel.services.choice.selection import (
    Selection,
    count_selections,
    enumerate_selections,
)
from desire_kernel.settings.settings import Settings
from desire_kernel.utils.progress import track

logger = logging.getLogger(__name__)

R = TypeVar("R")

# selections handed to the pool per round; results are consumed in order
_BATCH_PER_WORKER = 16


def translate_away(options: OptionSet, u: Gamble) -> OptionSet:
    """(S \\ {u}) - u, the set whose entailment rejects u from S."""
    return OptionSet(options.space, tuple(v - u for v in options if v != u))


@singleton
class ChoiceService:
    """Inference on sets of desirable option sets.

    Closure membership breaks down over selections: B is entailed by A iff for
    every selection φ, either φ(A) is inconsistent or B meets D_φ =
    posi(V≻0 ∪ φ(A)). Branches run on a thread pool; results are merged in
    selection order so verdicts and certificates do not depend on scheduling.
    """

    @inject
    def __init__(self, cone_component: ConeComponent, settings: Settings) -> None:
        self.cone = cone_component
        self.selection_cap = settings.engine.selection_cap
        self.progress_interval = settings.engine.progress_interval
        self.count_workers = settings.engine.threads or os.cpu_count() or 1
        self._branch_pool = (
            multiprocessing.pool.ThreadPool(processes=self.count_workers)
            if self.count_workers > 1
            else None
        )
        logger.info(
            "Initialized ChoiceService with count_workers=%s", self.count_workers
        )

    def __del__(self) -> None:
        pool = getattr(self, "_branch_pool", None)
        if pool is not None:
            pool.close()

    def enumerate_selections(
        self, assessment: OptionSetAssessment
    ) -> Iterator[Selection]:
        """All selections of the assessment, after checking the selection cap.

        Raises:
            EmptyOptionSetError: if an assessed set is empty.
            SelectionCapExceededError: above `engine.selection_cap` selections.
        """
        count = count_selections(assessment)
        if count > self.selection_cap:
            logger.warning(
                "Aborting query: count=%s selections above cap=%s",
                count,
                self.selection_cap,
            )
            raise SelectionCapExceededError(count, self.selection_cap)
        return enumerate_selections(assessment)

    def _sweep(
        self,
        branch: Callable[[Selection], R],
        assessment: OptionSetAssessment,
        label: str,
    ) -> Iterator[tuple[Selection, R]]:
        """Evaluate `branch` on every selection, yielding in selection order.

        Stopping the iteration early stops the sweep after the current batch.
        """
        selections = self.enumerate_selections(assessment)
        total = count_selections(assessment)
        batch_size = self.count_workers * _BATCH_PER_WORKER

        def evaluate() -> Iterator[tuple[Selection, R]]:
            while batch := list(itertools.islice(selections, batch_size)):
                if self._branch_pool is not None:
                    results = self._branch_pool.map(branch, batch)
                else:
                    results = [branch(selection) for selection in batch]
                yield from zip(batch, results)

        return track(evaluate(), total, label, self.progress_interval)

    @staticmethod
    def _check_query(assessment: OptionSetAssessment, options: OptionSet) -> None:
        options.require_non_empty("B")
        check_same_space(assessment.space, options)
        if assessment.has_empty_set():
            raise InconsistentAssessmentError("assessment contains the empty set")

    def k_consistent(self, assessment: OptionSetAssessment) -> Verdict:
        """Decide whether the assessment has a coherent extension."""
        for i, option_set in enumerate(assessment.sets):
            if option_set.is_empty():
                return Verdict(False, InconsistentCertificate(empty_set_index=i))

        zero = assessment.space.zero()

        def branch(selection: Selection) -> ConeWitness | None:
            return self.cone.cone_contains(selection.generators(assessment), zero)

        inconsistent: list[InconsistentBranch] = []
        for selection, witness in self._sweep(branch, assessment, "consistency"):
            if witness is None:
                return Verdict(
                    True, ConsistentCertificate(selection), len(inconsistent) + 1
                )
            inconsistent.append(InconsistentBranch(selection, witness))
        return Verdict(
            False,
            InconsistentCertificate(branches=tuple(inconsistent)),
            len(inconsistent),
        )

    def k_entails(self, assessment: OptionSetAssessment, options: OptionSet) -> Verdict:
        """Decide B ∈ cl(A).

        Raises:
            EmptyOptionSetError: if B is empty.
            InconsistentAssessmentError: if A has no coherent extension.
        """
        self._check_query(assessment, options)
        zero = assessment.space.zero()

        def branch(selection: Selection) -> EntailedBranch | None:
            generators = selection.generators(assessment)
            inconsistency = self.cone.cone_contains(generators, zero)
            if inconsistency is not None:
                return EntailedBranch(selection, inconsistency=inconsistency)
            for index, b in enumerate(options):
                witness = self.cone.cone_contains(generators, b)
                if witness is not None:
                    return EntailedBranch(selection, witness_index=index, cone=witness)
            return None

        return self._entailment_verdict(
            self._sweep(branch, assessment, "entailment"), assessment, mixing=False
        )

    def k_entails_mixing(
        self, assessment: OptionSetAssessment, options: OptionSet
    ) -> Verdict:
        """Decide B ∈ cl_M(A): posi(B) meets D_φ for every consistent φ."""
        self._check_query(assessment, options)
        zero = assessment.space.zero()

        def branch(selection: Selection) -> EntailedBranch | None:
            generators = selection.generators(assessment)
            inconsistency = self.cone.cone_contains(generators, zero)
            if inconsistency is not None:
                return EntailedBranch(selection, inconsistency=inconsistency)
            witness = self.cone.posi_meets_cone(options, generators)
            if witness is None:
                return None
            return EntailedBranch(selection, mixing=witness)

        return self._entailment_verdict(
            self._sweep(branch, assessment, "mixing entailment"),
            assessment,
            mixing=True,
        )

    @staticmethod
    def _entailment_verdict(
        outcomes: Iterator[tuple[Selection, EntailedBranch | None]],
        assessment: OptionSetAssessment,
        mixing: bool,
    ) -> Verdict:
        branches: list[EntailedBranch] = []
        for selection, outcome in outcomes:
            if outcome is None:
                certificate = NotEntailedCertificate(
                    selection, selection.generators(assessment).gambles, mixing
                )
                logger.debug("Not entailed, failing selection=%s", selection.picks)
                return Verdict(False, certificate, len(branches) + 1)
            branches.append(outcome)
        if all(branch.vacuous for branch in branches):
            raise InconsistentAssessmentError(
                "every selection of the assessment is inconsistent"
            )
        logger.debug("Entailed over count=%s selections", len(branches))
        certificate = EntailedCertificate(tuple(branches), mixing)
        return Verdict(True, certificate, len(branches))

    def reject_set(
        self, assessment: OptionSetAssessment, options: OptionSet, mixing: bool = False
    ) -> OptionSet:
        """R(S) = {u ∈ S : (S \\ {u}) - u is entailed}."""
        options.require_non_empty("S")
        check_same_space(assessment.space, options)
        if not self.k_consistent(assessment):
            raise InconsistentAssessmentError("assessment is inconsistent")
        entails = self.k_entails_mixing if mixing else self.k_entails
        rejected = []
        for u in options:
            translated = translate_away(options, u)
            if translated.is_empty():
                continue
            if entails(assessment, translated):
                rejected.append(u)
        return OptionSet(options.space, tuple(rejected))

    def choice_set(
        self, assessment: OptionSetAssessment, options: OptionSet, mixing: bool = False
    ) -> OptionSet:
        rejected = self.reject_set(assessment, options, mixing)
        return OptionSet(options.space, tuple(u for u in options if u not in rejected))

    def e_admissible_choice(self, credal: CredalSet, options: OptionSet) -> OptionSet:
        """Options maximizing expectation under at least one P in conv(M)."""
        options.require_non_empty("S")
        check_same_space(credal.space, options)
        chosen = tuple(
            u
            for u in options
            if self.cone.prevision_below(credal, translate_away(options, u).gambles)
            is not None
        )
        return OptionSet(options.space, chosen)

    def credal_reject_set(self, credal: CredalSet, options: OptionSet) -> OptionSet:
        """Rejection set of the model K_M, decided through `credal_accepts`."""
        options.require_non_empty("S")
        check_same_space(credal.space, options)
        rejected = []
        for u in options:
            translated = translate_away(options, u)
            if not translated.is_empty() and self.cone.credal_accepts(
                credal, translated
            ):
                rejected.append(u)
        return OptionSet(options.space, tuple(rejected))

    def arch_margin(
        self, assessment: OptionSetAssessment, options: OptionSet
    ) -> MarginResult:
        """Supremum of ε >= 0 with B - ε·1 ∈ cl(A).

        Raises:
            NotEntailedError: if B itself is not entailed.
        """
        if not self.k_entails(assessment, options):
            raise NotEntailedError(f"{options} is not entailed by the assessment")
        zero = assessment.space.zero()

        def branch(selection: Selection) -> Bound | None:
            generators = selection.generators(assessment)
            if self.cone.cone_contains(generators, zero) is not None:
                return None
            best = ZERO
            for b in options:
                margin = self.cone.shift_margin(generators, b)
                if margin is UNBOUNDED:
                    return UNBOUNDED
                if margin is not None and margin > best:
                    best = margin
            return best

        margins = [m for _, m in self._sweep(branch, assessment, "margin")]
        finite = [m for m in margins if isinstance(m, Fraction)]
        value: Bound = min(finite) if finite else UNBOUNDED
        attained = False
        if value is not UNBOUNDED:
            shifted = OptionSet(
                options.space, tuple(b - options.space.constant(value) for b in options)
            )
            attained = value == 0 or self.k_entails(assessment, shifted).answer
        logger.debug("Margin value=%s attained=%s", value, attained)
        return MarginResult(value, attained, len(margins))

    def totality_query(self, assessment: OptionSetAssessment, u: Gamble) -> Verdict:
        """Decide {u, -u} ∈ cl(A) for a non-zero u."""
        if u.is_zero():
            raise ZeroGambleError("totality is only asked of non-zero gambles")
        return self.k_entails(assessment, OptionSet(u.space, (u, -u)))
