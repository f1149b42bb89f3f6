"""
Transcendental functions from areas on three curves.

- roots: square and n-th roots without library powers
- areas: bracketed region areas and the curve-point solvers
- functions: cos/sin, cosh/sinh, exp, ln, summation matrices, ladders
- checks: identity and inequality reports
- jets: first-order jets of the primitive functions

``jets`` is imported on demand since it depends on ``core.jet``.
"""

from .areas import AreaBracket, CurveId, pi, sector_area, solve_area
from .functions import (
    SumMatrix,
    geo_cos_sin,
    geo_cosh_sinh,
    geo_exp,
    geo_ln,
    parallelogram_bound,
    sum_matrix,
)

__all__ = [
    "AreaBracket",
    "CurveId",
    "SumMatrix",
    "geo_cos_sin",
    "geo_cosh_sinh",
    "geo_exp",
    "geo_ln",
    "parallelogram_bound",
    "pi",
    "sector_area",
    "solve_area",
    "sum_matrix",
]
