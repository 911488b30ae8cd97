"""Exception types shared across the toolkit.

Two families: configuration errors (bad input files / parameters, CLI
exit code 2) and numerical guards (a computation refused to proceed or
could not certify its result, CLI exit code 3).
"""


class ConfigError(ValueError):
    """Base for run-configuration problems."""


class ParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ConfigError):
    def __init__(self, message: str, key: str | None = None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class NumericalGuard(RuntimeError):
    """Base for guard failures in numerical routines."""

    @property
    def guard_name(self) -> str:
        return type(self).__name__


class NonFiniteError(NumericalGuard):
    pass


class StepFailureError(NumericalGuard):
    pass


class ZeroEnergyError(NumericalGuard):
    pass


class ContourTooCloseError(NumericalGuard):
    pass


class NoConvergenceError(NumericalGuard):
    pass


class GridMismatchError(NumericalGuard):
    pass


class DomainTagError(NumericalGuard):
    pass


class ResampleLossError(NumericalGuard):
    pass


class WraparoundGuardError(NumericalGuard):
    pass


class OutrunGuardError(NumericalGuard):
    pass


class SupportGuardError(NumericalGuard):
    pass


class IllConditionedError(NumericalGuard):
    pass
