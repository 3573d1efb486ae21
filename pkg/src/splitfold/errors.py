"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: validation 2, resource limit 3,
property violation 4.
"""

import os


class SplitfoldError(Exception):
    """Base class for all library errors."""


class ValidationError(SplitfoldError, ValueError):
    """Malformed input: bad word, invalid graph, dangling reference, etc."""


class ParseError(ValidationError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class ResourceLimitError(SplitfoldError):
    """The input lies outside the supported envelope."""


class PropertyViolation(SplitfoldError):
    """A checked mathematical invariant failed; always a bug signal."""


class NoWitnessError(SplitfoldError):
    """A witness was requested for a path that fills."""


class UnsupportedConfiguration(SplitfoldError, NotImplementedError):
    """A construction was asked for in a configuration it does not handle."""


class InapplicableError(SplitfoldError):
    """Preconditions of an operation do not hold (e.g. no eligible vertex)."""


DEFAULT_MAX_EDGES = 64
MAX_RANK = 5


def max_edges() -> int:
    """Edge envelope for Whitehead searches, overridable by SPLITFOLD_MAX_EDGES."""
    raw = os.environ.get("SPLITFOLD_MAX_EDGES")
    if raw is None:
        return DEFAULT_MAX_EDGES
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"SPLITFOLD_MAX_EDGES must be an integer, got {raw!r}")
    if value <= 0:
        raise ValidationError("SPLITFOLD_MAX_EDGES must be positive")
    return value
