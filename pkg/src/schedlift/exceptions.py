"""Exception hierarchy. Every error raised on purpose derives from ``ScheduleLiftError``."""


class ScheduleLiftError(Exception):
    pass


class NonIntegralEpsilonInverse(ScheduleLiftError, ValueError):
    pass


class ConfigurationExplosion(ScheduleLiftError):
    pass


class BudgetExceeded(ScheduleLiftError):
    pass


class DegreeTooLarge(ScheduleLiftError, ValueError):
    pass


class LiftExplosion(BudgetExceeded):
    def __init__(self, count, budget):
        super().__init__(f"lift would need {count} items, budget is {budget}")
        self.count = count
        self.budget = budget


class MatrixTooLarge(BudgetExceeded):
    pass


class InfeasiblePoint(ScheduleLiftError, ValueError):
    pass


class InfeasibleInput(InfeasiblePoint):
    pass


class NonIntegralPoint(ScheduleLiftError, ValueError):
    pass


class DegreeExceeded(ScheduleLiftError, ValueError):
    pass


class DegreeExhausted(ScheduleLiftError):
    """Raised when a pseudoexpectation has no degree left for the next step.

    ``progress`` carries whatever partial trace the caller accumulated.
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress if progress is not None else []


class ZeroMass(ScheduleLiftError, ZeroDivisionError):
    pass


class InconsistentCounts(ScheduleLiftError, ValueError):
    pass


class StabilizationError(ScheduleLiftError):
    """An invariant of the stabilization procedure failed to hold."""


class SearchFailed(ScheduleLiftError):
    pass


class Infeasible(ScheduleLiftError):
    def __init__(self, message="LP is infeasible", certificate=None):
        super().__init__(message)
        self.certificate = certificate


class Unbounded(ScheduleLiftError):
    pass


class CertificationError(ScheduleLiftError, AssertionError):
    """A solver answer failed exact verification; this is an internal bug."""
