"""Certificates backing every choice-kernel verdict, and their JSON documents.

Witness coefficients are keyed by the index of the assessed option set whose
pick they multiply, so a document can be re-checked against the model alone.
"""
from dataclasses import dataclass
from typing import Literal

from pydantic import AliasChoices, BaseModel, Field

from desire_kernel.components.cone.cone_component import ConeWitness, MixingWitness
from desire_kernel.core.assessment import OptionSetAssessment
from desire_kernel.core.gamble import Gamble
from desire_kernel.core.rational import format_rational
from desire_kernel.services.choice.selection import Selection


@dataclass(frozen=True)
class EntailedBranch:
    """Evidence for one selection φ of an entailed query.

    Exactly one of the three witnesses is set: `inconsistency` for a vacuous
    branch (0 ∈ D_φ), `cone` with `witness_index` for plain entailment, `mixing`
    for mixing entailment.
    """

    selection: Selection
    witness_index: int | None = None
    cone: ConeWitness | None = None
    mixing: MixingWitness | None = None
    inconsistency: ConeWitness | None = None

    @property
    def vacuous(self) -> bool:
        return self.inconsistency is not None


@dataclass(frozen=True)
class EntailedCertificate:
    branches: tuple[EntailedBranch, ...]
    mixing: bool = False


@dataclass(frozen=True)
class NotEntailedCertificate:
    """A selection φ whose cone D_φ meets every assessed set but misses B."""

    selection: Selection
    generators: tuple[Gamble, ...]
    mixing: bool = False


@dataclass(frozen=True)
class ConsistentCertificate:
    selection: Selection


@dataclass(frozen=True)
class InconsistentBranch:
    selection: Selection
    witness: ConeWitness


@dataclass(frozen=True)
class InconsistentCertificate:
    """Either an empty assessed set, or a zero-witness for every selection."""

    empty_set_index: int | None = None
    branches: tuple[InconsistentBranch, ...] = ()


Certificate = (
    EntailedCertificate
    | NotEntailedCertificate
    | ConsistentCertificate
    | InconsistentCertificate
)


def _lambda_by_set(
    witness: ConeWitness, selection: Selection, assessment: OptionSetAssessment
) -> dict[str, str]:
    weights = witness.lambda_map()
    keyed: dict[str, str] = {}
    for i, pick in enumerate(selection.gambles(assessment)):
        weight = weights.pop(pick, None)
        if weight:
            keyed[str(i)] = format_rational(weight)
    return keyed


class BranchDocument(BaseModel):
    selection: list[int]
    vacuous: bool = False
    witness_index: int | None = None
    mu: list[str] | None = None
    lambda_: dict[str, str] = Field(
        default_factory=dict,
        validation_alias=AliasChoices("lambda", "lambda_"),
        serialization_alias="lambda",
    )
    slack: list[str]


class CertificateDocument(BaseModel):
    """Stable JSON shape of a certificate."""

    kind: Literal["entailed", "not-entailed", "consistent", "inconsistent"]
    mixing: bool | None = None
    selection: list[int] | None = None
    generators: list[list[str]] | None = None
    empty_set_index: int | None = None
    branches: list[BranchDocument] | None = None

    @staticmethod
    def from_certificate(
        certificate: Certificate, assessment: OptionSetAssessment
    ) -> "CertificateDocument":
        if isinstance(certificate, EntailedCertificate):
            return CertificateDocument(
                kind="entailed",
                mixing=certificate.mixing,
                branches=[
                    _entailed_branch_document(branch, assessment)
                    for branch in certificate.branches
                ],
            )
        if isinstance(certificate, NotEntailedCertificate):
            return CertificateDocument(
                kind="not-entailed",
                mixing=certificate.mixing,
                selection=list(certificate.selection.picks),
                generators=[g.to_strings() for g in certificate.generators],
            )
        if isinstance(certificate, ConsistentCertificate):
            return CertificateDocument(
                kind="consistent", selection=list(certificate.selection.picks)
            )
        return CertificateDocument(
            kind="inconsistent",
            empty_set_index=certificate.empty_set_index,
            branches=[
                BranchDocument(
                    selection=list(branch.selection.picks),
                    vacuous=True,
                    lambda_=_lambda_by_set(
                        branch.witness, branch.selection, assessment
                    ),
                    slack=branch.witness.slack.to_strings(),
                )
                for branch in certificate.branches
            ],
        )

    def to_json_dict(self) -> dict[str, object]:
        return self.model_dump(by_alias=True, exclude_none=True)


def _entailed_branch_document(
    branch: EntailedBranch, assessment: OptionSetAssessment
) -> BranchDocument:
    picks = list(branch.selection.picks)
    if branch.inconsistency is not None:
        witness = branch.inconsistency
        return BranchDocument(
            selection=picks,
            vacuous=True,
            lambda_=_lambda_by_set(witness, branch.selection, assessment),
            slack=witness.slack.to_strings(),
        )
    if branch.mixing is not None:
        witness = branch.mixing.cone
        return BranchDocument(
            selection=picks,
            mu=[format_rational(weight) for weight in branch.mixing.mu],
            lambda_=_lambda_by_set(witness, branch.selection, assessment),
            slack=witness.slack.to_strings(),
        )
    assert branch.cone is not None
    return BranchDocument(
        selection=picks,
        witness_index=branch.witness_index,
        lambda_=_lambda_by_set(branch.cone, branch.selection, assessment),
        slack=branch.cone.slack.to_strings(),
    )

