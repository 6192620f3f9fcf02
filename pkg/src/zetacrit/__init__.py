"""Multiprecision tools for a linear-algebraic characterisation of the zeros
of the Riemann zeta function through eta-regularised sequences."""

from .checks import Check, Report
from .errors import (EtaFactorZero, EtaZero, InternalMismatch, MethodDisagreement, MissingParameter,
                     PoleError, PrecisionEscalationExhausted, QuadratureNonconvergence, U1Zero,
                     UnknownSeries, ZetacritError)
from .mpsf import DEFAULT_CTX, PrecisionContext

__version__ = "0.1.0"

__all__ = [
    "Check",
    "Report",
    "PrecisionContext",
    "DEFAULT_CTX",
    "ZetacritError",
    "PrecisionEscalationExhausted",
    "PoleError",
    "EtaFactorZero",
    "EtaZero",
    "U1Zero",
    "InternalMismatch",
    "UnknownSeries",
    "QuadratureNonconvergence",
    "MethodDisagreement",
    "MissingParameter",
]
