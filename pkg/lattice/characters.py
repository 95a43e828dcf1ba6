"""Real Dirichlet characters and their L-values at s > 1."""
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
from loguru import logger
from scipy.special import zeta

from algebra.symbols import kronecker_symbol
from utils.errors import ConvergenceError, DomainError

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class DirichletChar:
    """chi(n) = values[n % modulus]"""
    modulus: int
    values: Tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        m = self.modulus
        if m < 1 or len(self.values) != m:
            raise DomainError(f"character table of length {len(self.values)} for modulus {m}")
        for n, v in enumerate(self.values):
            if v not in (-1, 0, 1):
                raise DomainError(f"chi({n}) = {v} is not in {{-1, 0, 1}}")
            if (v == 0) != (math.gcd(n, m) > 1):
                raise DomainError(f"chi({n}) = {v} but gcd({n}, {m}) = {math.gcd(n, m)}")
        for a in range(m):
            for b in range(a, m):
                if self.values[a * b % m] != self.values[a] * self.values[b]:
                    raise DomainError(f"not multiplicative: chi({a}*{b}) != chi({a})chi({b}) mod {m}")

    def __call__(self, n: int) -> int:
        return self.values[n % self.modulus]

    def table(self, n_max: int) -> np.ndarray:
        """chi(0), ..., chi(n_max)"""
        return np.asarray(self.values, dtype=np.int64)[np.arange(n_max + 1) % self.modulus]

    def __str__(self):
        return self.label or f"chi mod {self.modulus}"


def kronecker_character(d: int) -> DirichletChar:
    """n -> (d/n) for a discriminant d (d = 0, 1 mod 4); period |d|"""
    if d == 0 or d % 4 not in (0, 1):
        raise DomainError(f"{d} is not a discriminant")
    m = abs(d)
    values = (1 if m == 1 else 0,) + tuple(kronecker_symbol(d, n) for n in range(1, m))
    return DirichletChar(m, values, f"chi_{d}")


TRIVIAL = kronecker_character(1)


class LValue(NamedTuple):
    value: float
    tail: float
    tail_bound: float
    error_estimate: float


def dirichlet_L(chi: DirichletChar, s: float, tol: float = 1e-12, blocks: int = 256) -> LValue:
    """Period-block partial sum up to N = blocks * modulus plus the exact Hurwitz tail.

    tail_bound is the crude bound N^(1-s)/(s-1) on the omitted part, the size of
    the correction the Hurwitz zeta values account for.
    """
    if s <= 1:
        raise DomainError(f"dirichlet_L needs s > 1, got {s}")
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    m = chi.modulus
    n_terms = blocks * m
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    terms = chi.table(n_terms)[1:] * n ** (-s)
    head = math.fsum(np.sum(terms.reshape(blocks, m), axis=1))
    residues = [a for a in range(1, m + 1) if chi(a)]
    tail = math.fsum(chi(a) * float(zeta(s, a / m + blocks)) for a in residues) / m ** s
    value = head + tail
    tail_bound = n_terms ** (1 - s) / (s - 1)
    # rounding in the block sums plus the relative accuracy of each Hurwitz value
    magnitude = float(np.sum(np.abs(terms)))
    error = 8 * EPS * (magnitude + len(residues) * tail_bound) + 1e-15 * tail_bound
    if error > tol:
        raise ConvergenceError(f"L({chi}, {s}) cannot reach {tol}", value, error)
    logger.debug(f"L({chi}, {s}) = {value:.15f} (head {head:.15f}, tail {tail:.3g})")
    return LValue(value, tail, tail_bound, error)


def d3_from_character() -> float:
    """(3 sqrt 3 / 4 pi) L(chi_-3, 2)"""
    return 3 * math.sqrt(3) / (4 * math.pi) * dirichlet_L(kronecker_character(-3), 2.0).value
