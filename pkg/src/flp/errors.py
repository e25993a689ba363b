"""Exception hierarchy shared by every engine."""

from __future__ import annotations


class FlpError(Exception):
    """Base class for all errors raised by this package."""


class MalformedTermError(FlpError):
    """A term has a node kind that the operation does not accept."""


class ArityError(FlpError):
    pass


class LoadError(FlpError):
    """A program or goal failed validation.

    ``line`` and ``col`` are 1-based and ``None`` when unknown.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 filename: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.filename = filename
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.filename or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.col is not None:
                where += f":{self.col}"
        return f"{where}: {self.message}"


class ParseError(LoadError):
    pass


class TransformError(FlpError):
    pass


class DerivationNotFound(FlpError):
    pass
