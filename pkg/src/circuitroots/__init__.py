"""Exact root counting for integer polynomial systems supported on circuits.

Counts the roots of an n x n system whose union of supports has at most
n+2 distinct exponent vectors, over the positive orthant, the real torus
(all coordinates nonzero), and all of R^n. The t = n+2 case reduces to the
signs of a univariate linear combination of logarithms at its critical
points and poles, determined by adaptive-precision ball arithmetic with an
exact algebraic test for true zeros.
"""

from .counter import (
    CountResult,
    OrthantSelector,
    PolySystem,
    count_affine,
    count_positive,
    count_torus,
)
from .gale import Support

__all__ = [
    "CountResult",
    "OrthantSelector",
    "PolySystem",
    "Support",
    "count_affine",
    "count_positive",
    "count_torus",
]

__version__ = "0.1.0"
