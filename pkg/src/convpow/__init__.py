"""Convolution powers of finitely supported sequences on Z and their local
limit expansions at any order."""

from .attractors import AttractorSpec, attractor_derivative, eval_applied, eval_attractor
from .catalog import bernoulli, lax_friedrichs, o3, symmetric_walk
from .engine import (
    ExpansionPlan,
    ExpansionResult,
    build_plan,
    check_envelope,
    corollary1_error,
    fit_slope,
    remainder,
)
from .polynomials import ExpansionPolynomial, bell_sum_polynomial, build_polynomials, eval_poly
from .sequence import INFINITY, Sequence, convolve, norm, power, symbol_eval
from .symbol import Alternative, SymbolReport, TangencyPoint, analyze, classify, find_tangency_points

__version__ = "0.1.0"
