"""F_p and F_{p^2} = F_p[w]/(w^2 - n) with vectorized arithmetic on (a, b) pairs meaning a + b w."""
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from algebra.symbols import is_prime, legendre_symbol
from utils.errors import DomainError

Elements = Tuple[np.ndarray, np.ndarray]


def least_nonresidue(p: int) -> int:
    for n in range(2, p):
        if legendre_symbol(n, p) == -1:
            return n
    raise DomainError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class FiniteField:
    p: int
    r: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.p in (2, 3):
            raise DomainError(f"characteristic {self.p} is excluded")
        if self.r not in (1, 2):
            raise DomainError(f"only degrees 1 and 2 are supported, got {self.r}")

    @property
    def q(self) -> int:
        return self.p ** self.r

    @cached_property
    def nonresidue(self) -> int:
        return least_nonresidue(self.p) if self.r == 2 else 0

    @property
    def modulus(self) -> Tuple[int, ...]:
        """Ascending coefficients of the defining polynomial over F_p"""
        return (0, 1) if self.r == 1 else (-self.nonresidue % self.p, 0, 1)

    def __str__(self):
        return f"F_{self.q}"

    def units(self) -> Elements:
        """All nonzero elements, in a fixed order"""
        p = self.p
        if self.r == 1:
            a = np.arange(1, p, dtype=np.int64)
            return a, np.zeros_like(a)
        a, b = np.divmod(np.arange(1, p * p, dtype=np.int64), p)
        return b, a

    def constant(self, c: int, shape=()) -> Elements:
        return np.full(shape, c % self.p, dtype=np.int64), np.zeros(shape, dtype=np.int64)

    def add(self, x: Elements, y: Elements) -> Elements:
        return (x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p

    def sub(self, x: Elements, y: Elements) -> Elements:
        return (x[0] - y[0]) % self.p, (x[1] - y[1]) % self.p

    def scale(self, c: int, x: Elements) -> Elements:
        return (c * x[0]) % self.p, (c * x[1]) % self.p

    def mul(self, x: Elements, y: Elements) -> Elements:
        p, n = self.p, self.nonresidue
        return (x[0] * y[0] + n * (x[1] * y[1] % p)) % p, (x[0] * y[1] + x[1] * y[0]) % p

    def norm(self, x: Elements) -> np.ndarray:
        """Norm to F_p; the identity when r = 1"""
        if self.r == 1:
            return x[0] % self.p
        return (x[0] * x[0] - self.nonresidue * (x[1] * x[1] % self.p)) % self.p

    def is_zero(self, x: Elements) -> np.ndarray:
        return (x[0] == 0) & (x[1] == 0)

    def quadratic_character(self, x: Elements) -> np.ndarray:
        """+1 on nonzero squares, -1 on non-squares, 0 at 0; over F_{p^2} it is the Legendre symbol of the norm"""
        table = legendre_table(self.p)
        return table[self.norm(x)]


def legendre_table(p: int) -> np.ndarray:
    table = -np.ones(p, dtype=np.int64)
    table[0] = 0
    table[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    return table


def broadcast(x: Elements, shape_axis: int, ndim: int) -> Elements:
    """Place a 1-D element array along one axis of an ndim grid"""
    index = [None] * ndim
    index[shape_axis] = slice(None)
    return x[0][tuple(index)], x[1][tuple(index)]
