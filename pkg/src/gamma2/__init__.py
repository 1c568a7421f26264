"""Exact and certified computations for the zeros of level 2 Eisenstein series."""

from .cn_kernel import bernoulli_numbers, cn_polynomials, euler_numbers
from .polynomial import IsolatedRoot, RationalPolynomial, refine_root, sturm_isolate
from .qseries import FracQSeries, PrecisionError, ScaledSeries

__all__ = [
    "FracQSeries",
    "IsolatedRoot",
    "PrecisionError",
    "RationalPolynomial",
    "ScaledSeries",
    "bernoulli_numbers",
    "cn_polynomials",
    "euler_numbers",
    "refine_root",
    "sturm_isolate",
]

__version__ = "0.1.0"
