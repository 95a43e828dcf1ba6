"""Kronecker symbol (a/n), the Legendre symbol extended to every nonzero n, and small prime helpers."""
import math
from typing import List

import numpy as np

from utils.errors import DomainError


def kronecker_symbol(a: int, n: int) -> int:
    if n == 0:
        raise DomainError("Kronecker symbol (a/0) is undefined here")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out 2 from n: (a/2) is 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_symbol(a: int, p: int) -> int:
    """Euler's criterion; p an odd prime"""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def primes_up_to(n: int) -> List[int]:
    """Sieve of Eratosthenes"""
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.nonzero(sieve)[0].tolist()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))
