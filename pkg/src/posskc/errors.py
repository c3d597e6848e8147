"""Exception hierarchy shared across the toolkit.

Every error raised on a user-facing path derives from PosskcError so the
command line front end can map failures to exit codes without pattern
matching on message text.
"""

from __future__ import annotations


class PosskcError(Exception):
    """Base class for all toolkit errors."""


class DegreeError(PosskcError, ValueError):
    """Malformed or out-of-range possibility degree."""


class FormatError(PosskcError):
    """Syntax error in a text format (PNET, DIMACS, NNF, base files).

    ``line`` is 1-based when known; formatted messages always name it so
    users can locate the offending input.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NetworkValidationError(PosskcError):
    """Semantic violation in a network: cycle, missing or duplicate CPT
    entry, normalization failure, or an unknown variable or value."""


class QueryError(PosskcError):
    """Ill-formed query term: unknown variable or value, or a variable
    assigned twice with different values."""


class SizeGuardError(PosskcError):
    """An exhaustive enumeration was requested beyond its size guard."""


class CompileBudgetError(PosskcError):
    """The compiler exceeded its node budget; no DAG is produced."""
