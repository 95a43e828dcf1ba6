"""The Hauptmodul t = (eta(tau) eta(6 tau) / (eta(2 tau) eta(3 tau)))^6 and k = t + 1/t."""
import cmath
import math

import numpy as np
from loguru import logger
from scipy.optimize import bisect

from modular.qseries import QExpansion, eta_product
from utils.errors import ConvergenceError, DomainError

HAUPTMODUL_ETA = ((1, 6), (6, 6), (2, -6), (3, -6))
# t(-1/(6 tau)) = t(tau): k(iy) is smallest, k = 6, at the fixed point y = 1/sqrt 6
BRACKET = (1 / math.sqrt(6), 3.0)


def _eta_tail(q: complex, N: int, terms: int) -> complex:
    n = np.arange(1, terms + 1)
    return complex(np.prod(1 - q ** (N * n)))


def eval_t(tau: complex, terms: int = 64) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"eval_t needs Im tau > 0, got {tau}")
    if terms < 16:
        raise DomainError(f"eval_t needs at least 16 product terms, got {terms}")
    q = cmath.exp(2j * math.pi * tau)
    ratio = _eta_tail(q, 1, terms) * _eta_tail(q, 6, terms) / (_eta_tail(q, 2, terms) * _eta_tail(q, 3, terms))
    # q-exponent 6 * (1 + 6 - 2 - 3) / 24 = 1/2
    return cmath.exp(1j * math.pi * tau) * ratio ** 6


def truncation_bound(tau: complex, terms: int) -> float:
    """Relative error of the truncated products, from |log(1 - x)| <= 2|x| for |x| <= 1/2"""
    r = abs(cmath.exp(2j * math.pi * complex(tau)))
    tail = r ** (terms + 1) / (1 - r)
    return math.expm1(6 * 4 * 2 * tail)


def k_of(tau: complex, terms: int = 64) -> complex:
    t = eval_t(tau, terms)
    return t + 1 / t


def hauptmodul_series(precision: int) -> QExpansion:
    """Integer q-expansion of t, starting q^(1/2) - 6q^(3/2) + ..."""
    return eta_product(HAUPTMODUL_ETA, precision)


def invert_k(k: float, tol: float = 1e-12, terms: int = 64) -> complex:
    """The point i y with y in [1/sqrt 6, 3] and k(i y) = k"""
    if k <= 6:
        raise DomainError(f"invert_k needs k > 6, got {k}")
    lo, hi = BRACKET
    f = lambda y: k_of(1j * y, terms).real - k
    if f(hi) < 0:
        raise DomainError(f"k = {k} lies beyond the bracket, k(3i) = {k_of(3j, terms).real:.6g}")
    y = bisect(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    residual = abs(f(y))
    if residual > tol * max(1.0, abs(k)):
        raise ConvergenceError(f"k(i y) - {k} = {residual:.3g} after bisection", 1j * y, residual)
    logger.debug(f"invert_k({k}) = {y:.15f} i")
    return 1j * y
