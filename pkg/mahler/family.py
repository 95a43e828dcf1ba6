"""m(P_k) for P_k = x + 1/x + y + 1/y + z + 1/z - k.

For fixed (y, z) = (e^{ia}, e^{ib}) the polynomial x^2 + c x + 1 with
c = 2cos a + 2cos b - k has root product 1, so by Jensen's formula the
x-integral is log of the larger root modulus: g(c) = arccosh(|c|/2) for
|c| >= 2 and 0 otherwise. See README.md for the derivation.
"""
import math
from typing import List

import scipy.integrate as spyint
from loguru import logger

from mahler.laurent import LaurentPolynomial, parse_laurent
from mahler.quadrature import FAMILY_REDUCTION, QuadratureResult, mahler_measure
from utils.errors import DomainError


def g(c: float) -> float:
    c = abs(c)
    if c <= 2.0:
        return 0.0
    return math.acosh(c / 2.0)


def _kinks(values: List[float]) -> List[float]:
    """Angles in (0, pi) whose cosine is one of values"""
    return sorted(math.acos(v) for v in values if -1.0 < v < 1.0)


def mahler_family(k: float, tol: float = 1e-6, limit: int = 200) -> QuadratureResult:
    """(1/pi^2) of the double integral of g over [0, pi]^2, split at the |c| = 2 kinks"""
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    k = float(k)
    calls = 0
    inner_err = 0.0
    opts = {"epsabs": tol / 10, "epsrel": 0.0, "limit": limit}

    def inner(a: float) -> float:
        nonlocal calls, inner_err
        shift = k - 2.0 * math.cos(a)

        def integrand(b: float) -> float:
            nonlocal calls
            calls += 1
            return g(2.0 * math.cos(b) - shift)

        points = _kinks([(shift + 2.0) / 2.0, (shift - 2.0) / 2.0])
        value, err = spyint.quad(integrand, 0.0, math.pi, points=points or None, **opts)
        inner_err = max(inner_err, err)
        return value

    outer_points = _kinks([(k - 4.0) / 2.0, k / 2.0, (k + 4.0) / 2.0])
    value, outer_err = spyint.quad(inner, 0.0, math.pi, points=outer_points or None, **opts)
    value /= math.pi ** 2
    err = (outer_err + math.pi * inner_err) / math.pi ** 2
    logger.debug(f"m(P_{k:g}) = {value:.15f} +- {err:.2g} ({calls} evaluations)")
    return QuadratureResult(value, err, max(calls, 1), FAMILY_REDUCTION, converged=err <= tol)


def family_laurent(k: int) -> LaurentPolynomial:
    return parse_laurent(f"x + 1/x + y + 1/y + z + 1/z - ({int(k)})", ["x", "y", "z"])


def family_quartic(k: int) -> LaurentPolynomial:
    """The homogeneous quartic xyzt * P_k(x/t, y/t, z/t)"""
    return parse_laurent(
        f"x^2*y*z + x*y^2*z + x*y*z^2 + t^2*(x*y + x*z + y*z) - ({int(k)})*x*y*z*t", ["x", "y", "z", "t"]
    )


def _integral_k(k: float) -> int:
    if not float(k).is_integer():
        raise DomainError(f"the polynomial forms need an integer k, got {k}")
    return int(k)


def verify_homogeneous_equivalence(k: float, tol: float = 1e-6, threads: int = 1) -> float:
    """|m(quartic form) - m(Laurent form)|; zero in exact arithmetic since the forms differ by a monomial.

    k must be an integer (10.0 is accepted) so that both forms have integer coefficients;
    any other k raises DomainError.
    """
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    n = _integral_k(k)
    quartic = mahler_measure(family_quartic(n), tol, threads=threads)
    laurent = mahler_measure(family_laurent(n), tol, threads=threads)
    diff = abs(quartic.value - laurent.value)
    logger.info(
        f"k={n}: quartic {quartic.value:.10f} ({quartic.method}), "
        f"Laurent {laurent.value:.10f} ({laurent.method}), |diff| = {diff:.3g}"
    )
    return diff
