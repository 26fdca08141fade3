"""Exception hierarchy shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(DomainError):
    """An argument hits a singular point (e.g. zero link distance)."""


class PreconditionError(ValueError):
    """The operation is not defined for this kind of configuration."""


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its target accuracy."""

    def __init__(self, message, achieved_tolerance=None):
        super().__init__(message)
        self.achieved_tolerance = achieved_tolerance


class ConfigError(ValueError):
    """Invalid run configuration; ``field`` names the offending key path."""

    def __init__(self, message, field=None, line=None, column=None):
        location = ""
        if line is not None:
            location = f" (line {line}, column {column})"
        prefix = f"{field}: " if field else ""
        super().__init__(f"{prefix}{message}{location}")
        self.field = field
        self.line = line
        self.column = column
