"""Exception hierarchy shared by every engine module.

Exit-code mapping used by the CLI: InputError / PreconditionError -> 2,
BudgetError -> 3, InternalCheckError -> 4.
"""


class DGSupportError(Exception):
    """Base class for all errors raised by this package."""


class InputError(DGSupportError):
    """Malformed or inconsistent input (shape, dimension, unknown name)."""


class ParseError(InputError):
    """Text input that does not conform to the accepted syntax."""


class UnsupportedGradingError(InputError):
    """Grading outside what the enumeration/homology routines can handle."""


class PreconditionError(DGSupportError):
    """An operation's stated precondition does not hold for the input."""


class BudgetError(DGSupportError):
    """A configured resource budget would be exceeded; nothing was computed."""


class InternalCheckError(DGSupportError):
    """An internal consistency check failed; this indicates a bug."""
