"""Two-parameter logarithmic approximations of the digamma function."""

from .approximant import A0, A0P, A0PP, A1, A_INFINITY, L, ParamA, L_partial_a, L_partial_x, thresholds
from .numcore import PrecisionContext, RationalPolynomial
from .oracle import euler_gamma, harmonic, polygamma

__all__ = [
    "A0", "A0P", "A0PP", "A1", "A_INFINITY", "L", "L_partial_a", "L_partial_x", "ParamA",
    "PrecisionContext", "RationalPolynomial", "euler_gamma", "harmonic", "polygamma", "thresholds",
]
