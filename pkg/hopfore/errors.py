"""Exception types raised by the workbench.

Verification failures are never raised: they come back as report entries.
Everything here signals bad input or a limit being hit.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for every error raised by ``hopfore``."""


class ArityError(WorkbenchError, ValueError):
    pass


class UnknownGeneratorError(WorkbenchError, ValueError):
    pass


class SupportError(WorkbenchError, ValueError):
    """An element uses generators outside the range an operation allows."""


class StepRangeError(WorkbenchError, IndexError):
    pass


class RewriteBudgetExceeded(WorkbenchError, RuntimeError):
    pass


class CharacterError(WorkbenchError, ValueError):
    pass


class WindingError(WorkbenchError, RuntimeError):
    pass


class NormalityError(WorkbenchError, ValueError):
    pass


class BuiltinError(WorkbenchError, ValueError):
    pass


class DegreeBoundError(WorkbenchError, ValueError):
    pass


class PresentationError(WorkbenchError, ValueError):
    """A positioned error in presentation text.

    ``kind`` is one of ``syntax``, ``unknown-identifier``, ``forward-reference``,
    ``unbound-parameter``, ``malformed-rational``, ``duplicate``,
    ``missing-inverse`` or ``not-constant``.
    """

    def __init__(self, kind: str, message: str, line: int | None = None, column: int | None = None):
        self.kind = kind
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.line is None:
            return f"{self.kind}: {self.message}"
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"
