"""Exception hierarchy shared by every layer of the machine."""

from __future__ import annotations


class QisaError(Exception):
    """Base class for all errors raised by this package."""


class WidthExceeded(QisaError, ValueError):
    pass


class DimensionMismatch(QisaError, ValueError):
    pass


class ZeroProbabilityBranch(QisaError, ValueError):
    pass


class MapDomainError(QisaError, ValueError):
    pass


class MapRangeError(QisaError, ValueError):
    pass


class IndexOutOfRange(QisaError, IndexError):
    pass


class TooLarge(QisaError, ValueError):
    pass


class ContractError(QisaError, ValueError):
    """A documented precondition of a classical helper was violated."""


class SourceError(QisaError):
    """An error tied to a position in program source text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class LexError(SourceError):
    pass


class ParseError(SourceError):
    pass


class ElaborationError(SourceError):
    pass


class ExecutionError(QisaError):
    """Runtime failure of one instruction; carries the instruction index."""

    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"instruction {index}: {cause}")
