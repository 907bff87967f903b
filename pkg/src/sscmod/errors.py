"""Exception types shared across the package."""


class SscError(Exception):
    """Base class for all package errors."""


class DimensionError(SscError, ValueError):
    pass


class ParameterError(SscError, ValueError):
    pass


class CapacityError(SscError):
    """Raised when an exhaustive search would exceed its configured cap."""


class StateError(SscError):
    pass


class PatternParseError(SscError, ValueError):
    """Malformed pattern text. Carries 1-based line/column of the offending token."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
