"""Exception hierarchy shared by the numerical modules and the CLI."""


class ZetacritError(Exception):
    """Base class for all library errors."""


class PrecisionEscalationExhausted(ZetacritError):
    """Cancellation persisted after the allowed number of precision doublings."""


class PoleError(ZetacritError):
    """Evaluation requested at a pole."""


class EtaFactorZero(ZetacritError):
    """The factor 1 - 2**(1 - s) vanishes, so zeta cannot be recovered from eta."""


class InternalMismatch(ZetacritError):
    """Two independent constructions of the same object disagree."""


class UnknownSeries(ZetacritError, ValueError):
    pass


class QuadratureNonconvergence(ZetacritError):
    """The quadrature did not reach its tolerance within the allowed refinement."""


class MethodDisagreement(ZetacritError):
    """Two evaluation methods for the same quantity disagree beyond tolerance."""


class EtaZero(ZetacritError):
    """eta(s) vanishes (to working precision) where it is needed as a divisor."""


class U1Zero(ZetacritError):
    pass


class MissingParameter(ZetacritError, ValueError):
    pass
