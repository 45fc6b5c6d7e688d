import logging

from injector import inject, singleton

from desire_kernel.components.cone.cone_component import (
    ConeComponent,
    ConeWitness,
    MixingWitness,
)
from desire_kernel.core.assessment import OptionSet, OptionSetAssessment
from desire_kernel.core.gamble import Gamble
from desire_kernel.core.rational import ZERO, parse_rational
from desire_kernel.services.choice.certificate import (
    BranchDocument,
    CertificateDocument,
)
from desire_kernel.services.choice.selection import Selection, enumerate_selections

logger = logging.getLogger(__name__)


class CertificateRejected(Exception):
    pass


def _require(condition: bool, reason: str) -> None:
    if not condition:
        raise CertificateRejected(reason)


@singleton
class CertificateVerifier:
    """Re-checks certificate documents against a model and a query.

    Only exact arithmetic and the cone primitives are used; nothing from the
    service that produced the certificate.
    """

    @inject
    def __init__(self, cone_component: ConeComponent) -> None:
        self.cone = cone_component

    def verify(
        self,
        assessment: OptionSetAssessment,
        query: OptionSet | None,
        document: CertificateDocument,
    ) -> bool:
        try:
            if document.kind == "entailed":
                self._verify_entailed(assessment, query, document)
            elif document.kind == "not-entailed":
                self._verify_not_entailed(assessment, query, document)
            elif document.kind == "consistent":
                self._verify_consistent(assessment, document)
            else:
                self._verify_inconsistent(assessment, document)
        except CertificateRejected as e:
            logger.info("Certificate kind=%s rejected: %s", document.kind, e)
            return False
        except (ValueError, IndexError) as e:
            logger.info("Certificate kind=%s malformed: %s", document.kind, e)
            return False
        return True

    @staticmethod
    def _selection(
        assessment: OptionSetAssessment, picks: list[int] | None
    ) -> Selection:
        _require(picks is not None, "missing selection")
        assert picks is not None
        selection = Selection(tuple(picks))
        _require(selection.is_valid_for(assessment), f"invalid selection {picks}")
        return selection

    @staticmethod
    def _witness(
        assessment: OptionSetAssessment,
        selection: Selection,
        branch: BranchDocument,
        target: Gamble,
    ) -> ConeWitness:
        picks = selection.gambles(assessment)
        lambdas = [ZERO] * len(picks)
        for key, literal in branch.lambda_.items():
            index = int(key)
            _require(0 <= index < len(picks), f"lambda key {key} out of range")
            lambdas[index] = parse_rational(literal)
        slack = assessment.space.gamble(*branch.slack)
        return ConeWitness(target, picks, tuple(lambdas), slack)

    def _require_all_selections(
        self, assessment: OptionSetAssessment, branches: list[BranchDocument]
    ) -> list[Selection]:
        expected = list(enumerate_selections(assessment))
        actual = [self._selection(assessment, branch.selection) for branch in branches]
        _require(actual == expected, "branches do not cover every selection in order")
        return actual

    def _verify_entailed(
        self,
        assessment: OptionSetAssessment,
        query: OptionSet | None,
        document: CertificateDocument,
    ) -> None:
        _require(query is not None and not query.is_empty(), "needs a non-empty query")
        assert query is not None
        branches = document.branches or []
        selections = self._require_all_selections(assessment, branches)
        zero = assessment.space.zero()
        ordering = assessment.ordering
        _require(
            not all(branch.vacuous for branch in branches),
            "every branch is vacuous: the assessment is inconsistent",
        )
        for selection, branch in zip(selections, branches):
            if branch.vacuous:
                witness = self._witness(assessment, selection, branch, zero)
                _require(witness.verify(ordering), f"bad zero witness at {selection}")
            elif document.mixing:
                _require(branch.mu is not None, f"missing mu at {selection}")
                assert branch.mu is not None
                mu = tuple(parse_rational(literal) for literal in branch.mu)
                _require(len(mu) == len(query), f"mu has wrong length at {selection}")
                target = zero
                for weight, b in zip(mu, query):
                    target = target + b * weight
                witness = self._witness(assessment, selection, branch, target)
                mixing = MixingWitness(query.gambles, mu, witness)
                _require(mixing.verify(ordering), f"bad mixing witness at {selection}")
            else:
                index = branch.witness_index
                _require(
                    index is not None and 0 <= index < len(query),
                    f"bad witness_index at {selection}",
                )
                assert index is not None
                witness = self._witness(
                    assessment, selection, branch, query.gambles[index]
                )
                _require(witness.verify(ordering), f"bad cone witness at {selection}")

    def _verify_not_entailed(
        self,
        assessment: OptionSetAssessment,
        query: OptionSet | None,
        document: CertificateDocument,
    ) -> None:
        _require(query is not None and not query.is_empty(), "needs a non-empty query")
        assert query is not None
        selection = self._selection(assessment, document.selection)
        generators = selection.generators(assessment)
        listed = [assessment.space.gamble(*g) for g in document.generators or []]
        _require(
            tuple(listed) == generators.gambles, "generators differ from the selection"
        )
        _require(self.cone.cone_consistent(generators), "D_φ is not coherent")
        for i, option_set in enumerate(assessment.sets):
            _require(
                any(self.cone.cone_contains(generators, a) for a in option_set),
                f"assessed set {i} misses D_φ",
            )
        if document.mixing:
            _require(
                self.cone.posi_meets_cone(query, generators) is None,
                "posi(B) meets D_φ",
            )
        else:
            for b in query:
                _require(
                    self.cone.cone_contains(generators, b) is None, f"{b} lies in D_φ"
                )

    def _verify_consistent(
        self, assessment: OptionSetAssessment, document: CertificateDocument
    ) -> None:
        _require(not assessment.has_empty_set(), "assessment contains the empty set")
        selection = self._selection(assessment, document.selection)
        _require(
            self.cone.cone_consistent(selection.generators(assessment)),
            "selected generators are inconsistent",
        )

    def _verify_inconsistent(
        self, assessment: OptionSetAssessment, document: CertificateDocument
    ) -> None:
        if document.empty_set_index is not None:
            index = document.empty_set_index
            _require(
                0 <= index < len(assessment) and assessment.sets[index].is_empty(),
                f"assessed set {index} is not empty",
            )
            return
        branches = document.branches or []
        selections = self._require_all_selections(assessment, branches)
        zero = assessment.space.zero()
        for selection, branch in zip(selections, branches):
            witness = self._witness(assessment, selection, branch, zero)
            _require(
                witness.verify(assessment.ordering), f"bad zero witness at {selection}"
            )
