"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class MeasureError(ValueError):
    """Base class for invalid tables, scopes and configurations."""


class NegativeEntry(MeasureError):
    pass


class NotNormalized(MeasureError):
    pass


class ShapeMismatch(MeasureError):
    pass


class ScopeNotContained(MeasureError):
    pass


class ScopeMismatch(MeasureError):
    pass


class CompositionError(ArithmeticError):
    """A composition expression that is undefined.

    ``scope`` is the scope intersection on which the dominance check failed
    and ``witness`` a configuration on it where the denominator marginal is
    zero while the numerator marginal is not. ``step`` is the 1-based index
    of the failing operator inside a chain (``None`` for a single operation).
    """

    kind = "CompositionError"

    def __init__(self, message, scope=(), witness=None, step=None):
        super().__init__(message)
        self.scope = tuple(scope)
        self.witness = witness
        self.step = step


class DominanceViolation(CompositionError):
    kind = "DominanceViolation"


class UndefinedSubexpression(CompositionError):
    kind = "UndefinedSubexpression"

    def __init__(self, message, scope=(), witness=None, step=None, cause=None):
        super().__init__(message, scope=scope, witness=witness, step=step)
        self.cause = cause


class NoBucket(ValueError):
    def __init__(self, index):
        super().__init__(f"measure {index} fits in no covering set")
        self.index = index


class NotDecomposable(ValueError):
    pass


class ZeroEvidence(ZeroDivisionError):
    pass


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ValidationError(ValueError):
    def __init__(self, message, measure_index=None):
        super().__init__(message)
        self.measure_index = measure_index
