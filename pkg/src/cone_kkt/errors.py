"""Exception types shared across the package."""


class ConeKktError(Exception):
    """Base class for all cone-kkt errors."""


class DimensionMismatchError(ConeKktError):
    """An operand has the wrong length for the operation.

    Carries both the expected and the offending dimension so callers can
    report the mismatch without re-deriving it.
    """

    def __init__(self, context: str, expected: int, got: int):
        self.context = context
        self.expected = expected
        self.got = got
        super().__init__(f"{context}: expected dimension {expected}, got {got}")


class ValidationError(ConeKktError):
    """A problem definition violates one or more invariants.

    ``violations`` lists every failed check, not just the first one.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations))


class ProblemFormatError(ConeKktError):
    """A problem or certificate file could not be parsed."""


class Phase1AmbiguousError(ConeKktError):
    """The phase-1 search ended without certifying feasibility or infeasibility."""


class ProbeConsistencyError(ConeKktError):
    """A witness construction contradicted an earlier probe estimate."""


class EnumerationGuardError(ConeKktError):
    """The problem exceeds the size limit for exhaustive enumeration."""


class InfeasibleProblemError(ConeKktError):
    """No feasible candidate exists (or was found by exact enumeration)."""
