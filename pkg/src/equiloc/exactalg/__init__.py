"""Exact polynomial, rational-function and formal-character arithmetic."""

from .character import Character, geometric_expand, polarize
from .poly import MultiPoly, format_poly, format_rational, to_fraction
from .ratfun import ExpRatTerm, RatFun, as_polynomial, ratfun_sum_normalize
from .series import taylor_coefficient

__all__ = [
    "Character",
    "ExpRatTerm",
    "MultiPoly",
    "RatFun",
    "as_polynomial",
    "format_poly",
    "format_rational",
    "geometric_expand",
    "polarize",
    "ratfun_sum_normalize",
    "taylor_coefficient",
    "to_fraction",
]
