from __future__ import annotations


class ConfigurationError(ValueError):
    """Model, gain or trial configuration is inconsistent."""


class InputError(ValueError):
    """Questionnaire or log input cannot be interpreted."""


class ContractViolation(ValueError):
    """A caller broke an operation's precondition."""


class TrialError(RuntimeError):
    def __init__(self, label: str, position: int, cause: BaseException) -> None:
        super().__init__(f"Trial {label!r} (position {position}) failed: {cause}")
        self.label = label
        self.position = position
        self.cause = cause
