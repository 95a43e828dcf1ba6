"""Exact arithmetic: rationals, quadratic fields, polynomials, integer matrices."""
from algebra.fields import QQ, ExactRational, QuadFieldElement, QuadraticField, quad_sqrt, rational_sqrt
from algebra.matrix import IntMatrix, block_determinants, det_exact, gram_report, symmetrize
from algebra.polynomial import (
    ExactPolynomial,
    Factor,
    RationalFunction,
    poly_arith,
    poly_gcd,
    poly_sqrt,
    squarefree_factor,
)
from algebra.symbols import kronecker_symbol

__all__ = [
    "QQ",
    "ExactRational",
    "QuadFieldElement",
    "QuadraticField",
    "quad_sqrt",
    "rational_sqrt",
    "IntMatrix",
    "block_determinants",
    "det_exact",
    "gram_report",
    "symmetrize",
    "ExactPolynomial",
    "Factor",
    "RationalFunction",
    "poly_arith",
    "poly_gcd",
    "poly_sqrt",
    "squarefree_factor",
    "kronecker_symbol",
]
