"""Exact singularity (ARS) analysis, point-symmetry checks and variable
changes for scalar polynomial ODEs, with a floating-point cross-checker."""

from .jet import (
    JetPoly,
    RationalJetExpr,
    UnsupportedReduction,
    clear_denominators,
    evaluate,
    evaluate_exact,
    reduce_mod_equation,
    substitute,
    total_derivative,
)
from .parsing import ParseError, format_poly, parse_expr

__version__ = "0.1.0"
