"""Exact commutative algebra: Laurent polynomials and factored rational functions."""

from .laurent import LaurentPoly, scalar
from .ratfunc import DenominatorVanishes, RatFunc, rprod, rsum
from .vartable import VarTable
from .zerotest import find_witness, is_zero

__all__ = [
    "DenominatorVanishes",
    "LaurentPoly",
    "RatFunc",
    "VarTable",
    "find_witness",
    "is_zero",
    "rprod",
    "rsum",
    "scalar",
]
