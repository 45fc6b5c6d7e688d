"""JSON model documents.

A document has a `space`, an optional `ordering` and exactly one of
`assessment` (option sets), `desirable` (gambles) or `credal` (mass vectors).
Every rational is an integer or a `"p/q"` string. Problems are reported as
`ModelError` with a path into the document, e.g. `credal[1]`.
"""
import json
import logging
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError

from desire_kernel.core.assessment import (
    CredalSet,
    GambleAssessment,
    OptionSet,
    OptionSetAssessment,
    check_mass_function,
)
from desire_kernel.core.errors import ModelError
from desire_kernel.core.gamble import BackgroundOrdering, Gamble, SpaceSpec
from desire_kernel.core.rational import parse_rational

logger = logging.getLogger(__name__)

Model = OptionSetAssessment | GambleAssessment | CredalSet

RationalLiteral = StrictInt | StrictStr
GambleLiteral = list[RationalLiteral]

_BODY_FIELDS = ("assessment", "desirable", "credal")


class ModelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    space: list[StrictStr]
    ordering: Literal["nonneg", "strict"] | None = None
    assessment: list[list[GambleLiteral]] | None = None
    desirable: list[GambleLiteral] | None = None
    credal: list[GambleLiteral] | None = None

    @staticmethod
    def from_model(model: Model) -> "ModelDocument":
        space = list(model.space.atoms)
        if isinstance(model, OptionSetAssessment):
            return ModelDocument(
                space=space,
                ordering=model.ordering.value,
                assessment=[
                    [u.to_strings() for u in option_set] for option_set in model
                ],
            )
        if isinstance(model, GambleAssessment):
            return ModelDocument(
                space=space,
                ordering=model.ordering.value,
                desirable=[u.to_strings() for u in model],
            )
        return ModelDocument(space=space, credal=[p.to_strings() for p in model])


def format_path(loc: tuple[int | str, ...]) -> str:
    """Render a pydantic location tuple as `assessment[0][1]`.

    String parts after the field name are union-member tags and are dropped.
    """
    if not loc:
        return "$"
    head, *rest = loc
    return str(head) + "".join(f"[{part}]" for part in rest if isinstance(part, int))


def load_json(text: str, path: str = "$") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(path, f"malformed JSON: {e.msg} at line {e.lineno}") from e


def parse_gamble(value: Any, space: SpaceSpec, path: str = "gamble") -> Gamble:
    """Parse one decoded JSON gamble, checking its length against the space."""
    if not isinstance(value, list):
        raise ModelError(path, "expected an array of rationals")
    if len(value) != len(space):
        raise ModelError(
            path, f"expected {len(space)} coordinates, got {len(value)}"
        )
    coords = []
    for k, literal in enumerate(value):
        if isinstance(literal, bool) or not isinstance(literal, int | str):
            raise ModelError(f"{path}[{k}]", f"not an exact rational: {literal!r}")
        try:
            coords.append(parse_rational(literal))
        except ValueError as e:
            raise ModelError(f"{path}[{k}]", str(e)) from e
    return Gamble(tuple(coords), space)


def parse_option_set(value: Any, space: SpaceSpec, path: str = "set") -> OptionSet:
    if not isinstance(value, list):
        raise ModelError(path, "expected an array of gambles")
    return OptionSet(
        space,
        tuple(parse_gamble(u, space, f"{path}[{i}]") for i, u in enumerate(value)),
    )


def parse_document(
    document: ModelDocument,
    default_ordering: BackgroundOrdering = BackgroundOrdering.NONNEG,
) -> Model:
    present = [name for name in _BODY_FIELDS if getattr(document, name) is not None]
    if len(present) != 1:
        raise ModelError(
            "$", "expected exactly one of 'assessment', 'desirable', 'credal'"
        )
    try:
        space = SpaceSpec(tuple(document.space))
    except ValueError as e:
        raise ModelError("space", str(e)) from e
    ordering = (
        BackgroundOrdering(document.ordering)
        if document.ordering is not None
        else default_ordering
    )

    if document.assessment is not None:
        sets = tuple(
            parse_option_set(option_set, space, f"assessment[{i}]")
            for i, option_set in enumerate(document.assessment)
        )
        return OptionSetAssessment(space, sets, ordering)

    if document.desirable is not None:
        gambles = tuple(
            parse_gamble(u, space, f"desirable[{i}]")
            for i, u in enumerate(document.desirable)
        )
        return GambleAssessment(space, gambles, ordering)

    assert document.credal is not None
    if not document.credal:
        raise ModelError("credal", "credal set needs at least one vertex")
    vertices = []
    for i, vertex_literal in enumerate(document.credal):
        vertex = parse_gamble(vertex_literal, space, f"credal[{i}]")
        try:
            check_mass_function(vertex)
        except ValueError as e:
            raise ModelError(f"credal[{i}]", str(e)) from e
        vertices.append(vertex)
    return CredalSet(space, tuple(vertices))


def parse_model(
    text: str, default_ordering: BackgroundOrdering = BackgroundOrdering.NONNEG
) -> Model:
    """Parse and canonicalize a JSON model document.

    Args:
        text: the JSON document.
        default_ordering: ordering used when the document has no `ordering`.

    Raises:
        ModelError: on malformed JSON or any schema or value problem.
    """
    raw = load_json(text)
    try:
        document = ModelDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise ModelError(format_path(tuple(first["loc"])), first["msg"]) from e
    model = parse_document(document, default_ordering)
    logger.debug("Parsed model %s over space=%s", type(model).__name__, document.space)
    return model


def serialize_model(model: Model) -> str:
    """Canonical JSON document of a model; `parse_model` inverts it."""
    return ModelDocument.from_model(model).model_dump_json(exclude_none=True)
