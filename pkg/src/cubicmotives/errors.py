"""Shared exception types."""


class StructureError(ValueError):
    """Operands belong to different underlying spaces/varieties, or a
    structural precondition (shapes, slot counts) is violated."""


class DomainError(ValueError):
    """A mathematical precondition on the inputs fails (non-unit constant
    term, non-exceptional projection vector, degenerate form, ...)."""


class ShadowViolation(RuntimeError):
    """An identity that must hold for *every* valid input failed; this
    signals an implementation bug, not a bad input."""
