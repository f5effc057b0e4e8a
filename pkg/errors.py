"""
Error types for StabLab.

Every error raised on bad input is a ValueError subclass carrying the name of
the invariant it violates, so the command line can report it.
"""

from typing import Optional


class StabLabError(ValueError):
    """Base class for all StabLab input and contract errors."""

    invariant = "contract"

    def __init__(self, message: str, invariant: Optional[str] = None):
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant


class DimensionError(StabLabError):
    """Vector length does not match the lattice rank."""

    invariant = "rank-match"


class InvalidRootError(StabLabError):
    """A reflection was requested in a vector of the wrong self-pairing."""

    invariant = "root-norm"


class ContractError(StabLabError):
    """An operation precondition or a type invariant failed."""


class DomainError(StabLabError):
    """The operation is undefined on this input (e.g. the zero object)."""

    invariant = "nonzero-object"


class NotInGroupError(StabLabError):
    """A matrix is not in SL(2, Z)."""

    invariant = "det-one"


class ConfigError(StabLabError):
    """Malformed configuration or command-line value."""

    invariant = "config-parse"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column
