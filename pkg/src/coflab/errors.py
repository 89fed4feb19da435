"""Exception types shared across the package."""


class CoflabError(Exception):
    """Base class for all library errors."""


class DomainError(CoflabError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleAtPoint(CoflabError, ZeroDivisionError):
    """Evaluation point is a pole of the map or kernel."""


class PoleAtNonpositiveInteger(DomainError):
    pass


class UnsupportedDegree(DomainError):
    pass


class NotHyperbolic(DomainError):
    """Element or signature is not hyperbolic."""


class CoincidentPoints(DomainError):
    """Kernel evaluated on the diagonal where it is singular."""


class DivergentParameterRegion(DomainError):
    """Series or product does not converge for the requested parameter."""


class MissingA(DomainError):
    """The scattering trace is required when the surface has cusps."""


class UnsupportedN1(DomainError):
    """Weight one needs the derivative of the zeta function at its zero."""


class NonFiniteIntegrand(CoflabError, ArithmeticError):
    pass


class NotConverged(CoflabError, ArithmeticError):
    """Budget exhausted before the tolerance was met.

    ``result`` carries the best estimate reached.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class TailBoundExceedsTolerance(CoflabError, ArithmeticError):
    """A truncated series cannot certify its tail within the tolerance."""


class BudgetExceeded(CoflabError, RuntimeError):
    """Enumeration would exceed the element budget."""
