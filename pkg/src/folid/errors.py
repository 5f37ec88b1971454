"""Exception hierarchy shared by every folid module."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class FolidError(Exception):
    """Base class; ``span`` is set for errors raised while reading input text."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        kind = type(self).__name__
        if self.span is None:
            return f"{kind}: {self.message}"
        return f"{self.span}: {kind}: {self.message}"


# parser
class FolidSyntaxError(FolidError):
    pass


class ArityMismatch(FolidError):
    pass


class UndeclaredSymbol(FolidError):
    pass


class DuplicateSymbol(FolidError):
    pass


class TableIncomplete(FolidError):
    pass


class OutOfUniverse(FolidError):
    pass


class UnknownRule(FolidError):
    pass


class DanglingPremise(FolidError):
    pass


class BudSequentMismatch(FolidError):
    pass


# core / semantics
class NoClosedTerm(FolidError):
    pass


class UnboundVariable(FolidError):
    pass


# term models
class BudgetTooSmall(FolidError):
    pass


class NotNameExtended(FolidError):
    pass


class OpenFormula(FolidError):
    pass


# coding
class InvalidCode(FolidError):
    pass


# proof kernel
class BadParameters(FolidError):
    pass


class FreshnessViolation(FolidError):
    pass


class NoSuchProductionRule(FolidError):
    pass
