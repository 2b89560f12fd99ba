"""Exception types raised across the package."""


class SingKernError(Exception):
    pass


class DomainError(SingKernError, ValueError):
    """Argument outside the supported domain."""


class PoleError(DomainError):
    """Evaluation at a pole (nonpositive integer argument of Gamma and friends)."""


class LightConeError(DomainError):
    """Wave kernel queried on or outside the light cone r >= t."""


class DegeneracyError(SingKernError, ArithmeticError):
    """Parameter combination where every available evaluation route breaks down."""


class ConvergenceError(SingKernError, ArithmeticError):
    """Series or quadrature did not reach the requested tolerance.

    ``partial`` carries the last (unreliable) estimate.
    """

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial
