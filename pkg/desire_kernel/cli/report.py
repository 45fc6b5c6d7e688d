import hashlib
import json
from typing import Any

from pydantic import BaseModel, Field

from desire_kernel.core.assessment import OptionSet
from desire_kernel.core.document import Model, serialize_model
from desire_kernel.core.gamble import Gamble


class Timing(BaseModel):
    """Deterministic work counters; wall-clock time is only logged."""

    selections: int = Field(0, description="Selection branches examined.")


class Report(BaseModel):
    verdict: str
    value: Any | None = None
    certificate: dict[str, Any] | None = None
    timing: Timing = Field(default_factory=Timing)
    input_hash: str
    exit_code: int = Field(0, exclude=True)
    detail: str | None = Field(None, exclude=True)

    def render(self, json_output: bool) -> str:
        if json_output:
            return json.dumps(self.model_dump(exclude_none=True)) + "\n"
        if self.detail is None:
            return self.verdict + "\n"
        return f"{self.verdict} {self.detail}\n"


def set_value(options: OptionSet) -> list[list[str]]:
    return [u.to_strings() for u in options]


def gamble_value(u: Gamble) -> list[str]:
    return u.to_strings()


def input_hash(verb: str, model: Model, payload: dict[str, Any]) -> str:
    """sha256 of the canonical model, verb and query payload."""
    canonical = json.dumps(
        {
            "verb": verb,
            "model": json.loads(serialize_model(model)),
            "payload": payload,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
