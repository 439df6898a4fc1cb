"""
Error hierarchy shared by the solver services and the CLI.

Every error carries a human readable ``detail`` and the process exit code the
CLI reports for it.
"""

EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_NUMERICAL = 4


class SharpePIError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class InstanceFormatError(SharpePIError):
    """Malformed instance document; ``detail`` names the JSON path."""
    exit_code = EXIT_VALIDATION

    def __init__(self, detail: str, path: str = "$"):
        super().__init__(f"{path}: {detail}")
        self.path = path


class InstanceValidationError(SharpePIError):
    exit_code = EXIT_VALIDATION


class BudgetExceededError(SharpePIError):
    exit_code = EXIT_BUDGET


class EnumerationCapError(BudgetExceededError):
    pass


class NumericalError(SharpePIError):
    exit_code = EXIT_NUMERICAL


class EmptyIntervalSetError(SharpePIError):
    exit_code = EXIT_NUMERICAL
