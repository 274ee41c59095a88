"""Exception hierarchy.

Infinite constants are a regular outcome and are reported as ``inf``; the
exceptions below are reserved for malformed input and for numerical
procedures that could not deliver what was asked.
"""


class RevHardyError(Exception):
    """Base class for all package errors."""


class DomainError(RevHardyError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonAdmissibleWeight(DomainError):
    """A cumulative weighted norm is infinite at an interior point."""


class ConventionViolation(RevHardyError):
    """A Stieltjes integral meets an infinite plateau of the integrator
    on which the integrand does not vanish."""


class ToleranceNotMet(RevHardyError):
    """An enclosure could not be tightened to the requested tolerance
    within the refinement budget."""


class TruncationOverflow(RevHardyError):
    """A discretizing sequence needed more terms than allowed."""


class NotAlmostGeometric(DomainError):
    """A sequence failed the almost-geometric monotonicity test."""


class NotAbsolutelyContinuous(DomainError):
    """A measure charges a set that the reference measure does not."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
