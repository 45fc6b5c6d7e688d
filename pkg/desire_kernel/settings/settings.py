from typing import Literal

from pydantic import BaseModel, Field

from desire_kernel.settings.settings_loader import load_active_settings


class AppSettings(BaseModel):
    env_name: str = Field(
        description="Name of the environment (prod, test, local...)"
    )


class EngineSettings(BaseModel):
    """Inference engine configuration.

    Entailment over option-set assessments breaks down into one conic feasibility
    problem per selection (one option picked from every assessed set). The number
    of selections is the product of the set sizes, so it is capped.
    """

    selection_cap: int = Field(
        1_000_000,
        description="Maximal number of selections a single query may enumerate. "
        "Queries above the cap abort instead of approximating.",
        gt=0,
    )
    family_cap: int = Field(
        65_536,
        description="Maximal number of option sets `rn_transform` may produce.",
        gt=0,
    )
    threads: int = Field(
        0,
        description="Size of the worker pool used for selection branches. "
        "0 means one worker per logical core, 1 disables the pool.",
        ge=0,
    )
    progress_interval: int = Field(
        30,
        description="Seconds between two progress reports of a long selection sweep.",
        gt=0,
    )


class ModelSettings(BaseModel):
    default_ordering: Literal["nonneg", "strict"] = Field(
        "nonneg",
        description="Background ordering used when a model document does not name one. "
        "`nonneg`: u > 0 iff u >= 0 point-wise and u != 0. "
        "`strict`: u > 0 iff every coordinate is strictly positive.",
    )


class CliSettings(BaseModel):
    json_output: bool = Field(
        False, description="Emit a single JSON object instead of a plain line."
    )
    certify: bool = Field(
        False, description="Attach certificates to the report by default."
    )


class Settings(BaseModel):
    app: AppSettings
    engine: EngineSettings
    model: ModelSettings
    cli: CliSettings


"""
This is visible just for DI or testing purposes.

Use dependency injection or `settings()` method instead.
"""
unsafe_settings = load_active_settings()


def settings() -> Settings:
    """Get the current loaded settings from the DI container.

    For regular services use dependency injection instead.
    """
    from desire_kernel.di import global_injector

    return global_injector.get(Settings)
