"""Mahler measures of Laurent polynomials over the unit torus."""
from mahler.family import family_laurent, family_quartic, mahler_family, verify_homogeneous_equivalence
from mahler.laurent import LaurentPolynomial, format_laurent, parse_laurent
from mahler.quadrature import QuadratureResult, mahler_measure

__all__ = [
    "LaurentPolynomial",
    "QuadratureResult",
    "family_laurent",
    "family_quartic",
    "format_laurent",
    "mahler_family",
    "mahler_measure",
    "parse_laurent",
    "verify_homogeneous_equivalence",
]
