"""Exact arithmetic: Laurent polynomials, cyclotomic rings, finite-field linear algebra."""

from .combinat import base_p_digits, is_prime, lucas_binomial, require_odd_prime
from .cyclotomic import CycloElement, cyclotomic_degree, lp_eval_cyclotomic, reduce_mod_cyclotomic
from .gf import GF, FFMatrix, SolveResult, lowest_irreducible, solve_linear
from .laurent import ONE, X, ZERO, LaurentPoly, lp_mul

__all__ = [
    "CycloElement",
    "FFMatrix",
    "GF",
    "LaurentPoly",
    "ONE",
    "SolveResult",
    "X",
    "ZERO",
    "base_p_digits",
    "cyclotomic_degree",
    "is_prime",
    "lowest_irreducible",
    "lp_eval_cyclotomic",
    "lp_mul",
    "lucas_binomial",
    "reduce_mod_cyclotomic",
    "require_odd_prime",
    "solve_linear",
]
