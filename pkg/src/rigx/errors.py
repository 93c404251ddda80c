"""Exception types shared across the package."""
from __future__ import annotations


class RigxError(Exception):
    """Base class for all rigx errors."""


class BudgetExceeded(RigxError):
    """An exhaustive enumeration would visit more candidates than allowed."""

    def __init__(self, operation: str, count: int, budget: int):
        self.operation = operation
        self.count = count
        self.budget = budget
        super().__init__(f"{operation}: {count} candidates exceeds budget {budget}")


class NoSolution(RigxError):
    """A linear system A X = Y has no solution."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} of the right-hand side is outside colspace(A)")


class DimensionMismatch(RigxError, ValueError):
    pass


class FormatError(RigxError, ValueError):
    """Malformed matrix or data structure text."""


class RankDeficient(RigxError):
    pass


class PreconditionViolated(RigxError):
    pass


class NotComputingM(RigxError):
    """A black-box data structure disagrees with the target map on some input."""

    def __init__(self, x: tuple[int, ...], expected: tuple[int, ...], got: tuple[int, ...]):
        self.x = x
        self.expected = expected
        self.got = got
        super().__init__(f"on input {x}: expected {expected}, got {got}")


class NotACover(RigxError):
    pass


class InnerTooSmall(RigxError):
    """The inner dimension is below rank - k, so no decomposition exists."""

    def __init__(self, certificate, rank: int, k: int):
        self.certificate = certificate
        self.rank = rank
        self.k = k
        super().__init__(f"inner dimension {certificate.value} < rank {rank} - k {k}")


class InternalVerificationFailed(RigxError, AssertionError):
    """An assembled identity failed re-verification. Always a bug."""


class UnsupportedKind(RigxError, ValueError):
    pass
