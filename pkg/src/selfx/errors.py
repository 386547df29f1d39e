"""Exception hierarchy for selfx."""


class SelfxError(Exception):
    """Base class for all selfx errors."""


class DomainError(SelfxError, ValueError):
    """An argument lies outside the domain of an operation."""


class RangeError(SelfxError, ValueError):
    """Exponent range (n, m) outside the hypotheses of an operation."""


class DegenerateInput(SelfxError, ValueError):
    """The polynomial is constant, so its image is a single point."""


class InsufficientSamples(SelfxError, ValueError):
    """Too few samples to recover the requested exponent range."""


class BalancedModulusError(SelfxError, ValueError):
    """The balanced reduction is singular because |a_n| = |a_{-n}|."""


class ExceptionalInput(SelfxError):
    """The polynomial falls into an exceptional case; no count is defined.

    Attributes
    ----------
    status : ExceptionalStatus
    """

    def __init__(self, status, message=None):
        self.status = status
        super().__init__(message or f"exceptional input: {status}")


class SingularSystem(SelfxError):
    """The resultant vanishes identically (common factor of g and g*)."""


class BoundViolation(SelfxError):
    """More self-intersections were found than the theorem allows.

    This can only be numerical failure, so it is never returned as a result.
    """

    def __init__(self, count, bound):
        self.count = count
        self.bound = bound
        super().__init__(f"found {count} self-intersections, bound is {bound}")


class SaturationWarning(SelfxError, UserWarning):
    """The brute-force oracle found far more pairs than any finite count allows.

    Raised (not merely warned) because it signals a continuum of
    self-intersections.
    """

    def __init__(self, count, bound):
        self.count = count
        self.bound = bound
        super().__init__(f"oracle saturated: {count} pairs against bound {bound}")


class NoPathFound(SelfxError):
    """No connecting path exists in the free space at the tried resolutions."""


class ExcisionFailure(SelfxError):
    """No excision width produced disjoint simple arcs."""


class OrientationFailure(SelfxError):
    """Neither closure of the final arc is positively oriented."""


class GenericityFailure(SelfxError):
    """Random perturbation did not produce a generic polynomial."""


class BudgetExceeded(SelfxError):
    """The certified L^p distance exceeds the requested budget."""

    def __init__(self, distance, epsilon, message=None):
        self.distance = distance
        self.epsilon = epsilon
        super().__init__(message or f"certified distance {distance:.3g} exceeds budget {epsilon:.3g}")
