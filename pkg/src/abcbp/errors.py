"""Exception types shared across the package.

The CLI maps these onto exit codes: config errors -> 1, data errors -> 2,
numeric failures -> 3.
"""


class ShapeError(ValueError):
    """Input dimensions do not match what the operation requires."""


class NumericOverflowError(ArithmeticError):
    """A computation produced a non-finite intermediate or result."""


class ConfigError(ValueError):
    """Invalid configuration value or combination."""


class DataError(ValueError):
    """Base class for problems with input data files."""


class ParseError(DataError):
    """A data file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += f"{path}:"
        if line is not None:
            prefix += f"{line}:"
        super().__init__(f"{prefix} {message}" if prefix else message)


class EmptyDatasetError(DataError):
    """A data file contained no usable rows."""


class StateError(RuntimeError):
    """An operation was called on state that is not ready for it."""
