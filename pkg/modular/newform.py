"""The weight-3 level-8 newform f = eta(z)^2 eta(2z) eta(4z) eta(8z)^2 and its L-value at 3."""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger

from algebra.symbols import is_prime, kronecker_symbol, primes_up_to
from modular.qseries import eta_product
from utils.errors import DomainError, InconsistencyError

NEWFORM_ETA = ((1, 2), (2, 1), (4, 1), (8, 2))


@lru_cache(maxsize=8)
def _coefficients(n_max: int) -> Tuple[int, ...]:
    f = eta_product(NEWFORM_ETA, n_max)
    if f.leading_exponent != 1 or f.coefficients[0] != 1:
        raise InconsistencyError(f"eta product starts at q^{f.leading_exponent} with {f.coefficients[0]}")
    logger.debug(f"newform coefficients computed to n = {n_max}")
    return f.coefficients


def newform_coeffs(n_max: int) -> List[int]:
    """a_1, ..., a_{n_max}"""
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    return list(_coefficients(n_max))


def chi_minus8(n: int) -> int:
    return kronecker_symbol(-8, n)


@dataclass(frozen=True)
class TraceRecord:
    """Trace of Frobenius on the transcendental part at p, from the CM dichotomy"""
    p: int
    A_p: int
    middle_sign: int
    representation: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        split = self.p % 8 in (1, 3)
        if split:
            if self.representation is None or self.middle_sign != 1:
                raise InconsistencyError(f"p = {self.p} splits in Q(sqrt -2) but the record is {self}")
            a, b = self.representation
            if a * a + 2 * b * b != self.p or self.A_p != 2 * (a * a - 2 * b * b):
                raise InconsistencyError(f"bad representation {self.representation} for p = {self.p}")
        elif self.A_p != 0 or self.middle_sign != -1:
            raise InconsistencyError(f"p = {self.p} is inert in Q(sqrt -2) but the record is {self}")


def cm_trace(p: int) -> TraceRecord:
    if p == 2 or not is_prime(p):
        raise DomainError(f"cm_trace needs an odd prime, got {p}")
    if p % 8 in (5, 7):
        return TraceRecord(p, 0, -1)
    for b in range(math.isqrt(p // 2) + 1):
        rest = p - 2 * b * b
        a = math.isqrt(rest)
        if a * a == rest:
            return TraceRecord(p, 2 * (a * a - 2 * b * b), 1, (a, b))
    raise InconsistencyError(f"p = {p} = 1, 3 mod 8 has no representation a^2 + 2b^2")


def trace_table(p_max: int, n_max: Optional[int] = None) -> Dict[int, Tuple[int, int]]:
    """{p: (a_p from the eta product, A_p from the CM dichotomy)} for odd primes p <= p_max"""
    coeffs = newform_coeffs(max(p_max, n_max or 0))
    return {p: (coeffs[p - 1], cm_trace(p).A_p) for p in primes_up_to(p_max) if p > 2}


def hecke_prime_power_check(p: int, coeffs: List[int]) -> List[int]:
    """Exponents r with a_{p^(r+1)} != a_p a_{p^r} - chi_-8(p) p^2 a_{p^(r-1)} within the known range"""
    a = lambda n: coeffs[n - 1]
    eps = chi_minus8(p)
    bad = []
    r = 1
    while p ** (r + 1) <= len(coeffs):
        if a(p ** (r + 1)) != a(p) * a(p ** r) - eps * p * p * a(p ** (r - 1)):
            bad.append(r)
        r += 1
    return bad


def multiplicativity_defects(coeffs: List[int], bound: int) -> List[Tuple[int, int]]:
    """Coprime pairs m <= n with m n <= bound and a_mn != a_m a_n"""
    out = []
    for m in range(2, bound + 1):
        for n in range(m, bound // m + 1):
            if math.gcd(m, n) == 1 and coeffs[m * n - 1] != coeffs[m - 1] * coeffs[n - 1]:
                out.append((m, n))
    return out


class PartialL(NamedTuple):
    value: float
    tail_model: float


def lf3_partial(n_max: int = 100_000) -> PartialL:
    """sum_{n <= n_max} a_n / n^3; tail_model = (log N + 2 gamma + 1) / N bounds sum_{n > N} d(n)/n^2"""
    if n_max < 100:
        raise DomainError(f"lf3_partial needs n_max >= 100, got {n_max}")
    a = np.array(newform_coeffs(n_max), dtype=np.float64)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    terms = a / n ** 3
    value = math.fsum(np.sum(terms.reshape(-1, 100), axis=1)) if n_max % 100 == 0 else math.fsum(terms)
    tail = (math.log(n_max) + 2 * np.euler_gamma + 1) / n_max
    logger.debug(f"L(f, 3) partial sum to {n_max}: {value:.12f}")
    return PartialL(value, tail)


def euler_product_L3(p_max: int) -> float:
    """prod over p <= p_max of (1 - a_p p^-3 + chi_-8(p) p^-4)^-1"""
    coeffs = newform_coeffs(max(p_max, 2))
    log_total = math.fsum(
        -math.log1p(-coeffs[p - 1] / p ** 3 + chi_minus8(p) / p ** 4) for p in primes_up_to(p_max)
    )
    return math.exp(log_total)
