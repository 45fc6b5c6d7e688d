"""Errors raised by desire-kernel.

Domain and input problems are `ValueError`s (the CLI maps them to exit code 2);
resource caps are `RuntimeError`s (exit code 3). Infeasible or unbounded linear
programs are ordinary outcomes and never raise.
"""


class ModelError(ValueError):
    """A model document could not be parsed or validated."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class SpaceMismatchError(ValueError):
    pass


class EmptyOptionSetError(ValueError):
    pass


class InconsistentAssessmentError(ValueError):
    pass


class NotEntailedError(ValueError):
    pass


class InvalidCoefficientsError(ValueError):
    pass


class LpDimensionError(ValueError):
    pass


class SelectionCapExceededError(RuntimeError):
    def __init__(self, count: int, cap: int) -> None:
        self.count = count
        self.cap = cap
        super().__init__(
            f"Query needs count={count} selections, above selection_cap={cap}"
        )


class FamilyCapExceededError(RuntimeError):
    def __init__(self, cap: int) -> None:
        self.cap = cap
        super().__init__(f"Operator output exceeds family_cap={cap} option sets")


class ZeroGambleError(ValueError):
    pass
