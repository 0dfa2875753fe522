"""Shared exception types.

Everything raised on purpose by the library derives from HahnlabError, so the
command line front end can map "our" failures to exit code 64 while letting
genuine bugs propagate as ordinary tracebacks.
"""


class HahnlabError(Exception):
    """Base class for all deliberate library errors."""


class GroupMismatchError(HahnlabError, ValueError):
    """Operands belong to different group (or field) specifications."""


class DomainError(HahnlabError, ValueError):
    """A value lies outside an operation's mathematical domain."""


class PreconditionError(HahnlabError, ValueError):
    """A documented precondition of an operation was violated."""


class HypothesisError(HahnlabError, ValueError):
    """A window check refuted a construction hypothesis.

    ``witness`` carries the offending element or pair, when one exists.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InfiniteExpansionError(HahnlabError, ArithmeticError):
    """The requested truncation admits an infinite expansion."""


class NoUnitCombinationError(HahnlabError, ValueError):
    """No unit combination exists; ``valuation_index`` names the failing place."""

    def __init__(self, message, valuation_index=None):
        super().__init__(message)
        self.valuation_index = valuation_index


class InputFormatError(HahnlabError, ValueError):
    """Malformed serialized input (JSON wire formats, CLI arguments)."""
