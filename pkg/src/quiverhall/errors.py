"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all engine-specific errors."""


class ShapeError(EngineError):
    """Matrix or vector dimensions are inconsistent."""


class CategoryMismatch(EngineError):
    """Operands live over different quivers or different ground fields."""


class BudgetExceeded(EngineError):
    """An exhaustive scan would exceed the configured search budget."""


class NotASubmodule(EngineError):
    """A family of subspaces is not stable under the arrow maps."""


class NotInSubcategory(EngineError):
    """An object violates a subcategory precondition (e.g. has a forbidden summand)."""


class WindowExceeded(EngineError):
    """A bounded complex leaves the supported degree window."""


class PreconditionError(EngineError):
    """An operation-specific precondition fails (bad vertex, not a sink, ...)."""


class ConversionMismatch(EngineError):
    """The two independent structure-constant routes disagree: an engine bug."""


class SignConventionBroken(EngineError):
    """A constructed differential fails d*d = 0: an engine bug."""
