"""Arithmetic of Pell conics X^2 - disc*Y^2 = 4.

Group law over Z, Q and finite rings, point counts and local zeta
functions, conic primality tests and p+-1 factoring, first 2-descent,
canonical heights, and the class number / BSD-style identity.
"""

from .conic import ConicPoint, PellConic, add, neg, neutral, on_curve, scalar_mul, sub
from .ntkernel import NotPrimeError, discriminant_from, pell4_fundamental

__version__ = "0.1.0"

__all__ = [
    "ConicPoint",
    "NotPrimeError",
    "PellConic",
    "add",
    "discriminant_from",
    "neg",
    "neutral",
    "on_curve",
    "pell4_fundamental",
    "scalar_mul",
    "sub",
]
