"""Truncated q-expansions with a rational leading exponent, and Dedekind eta products."""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Tuple

import numpy as np

from utils.errors import DomainError

INT64_HEADROOM = 1 << 62


@dataclass(frozen=True)
class QExpansion:
    """q^leading_exponent * (c_0 + c_1 q + ... + c_{precision-1} q^{precision-1} + O(q^precision))"""
    leading_exponent: Fraction
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not coeffs:
            raise DomainError("a q-expansion needs at least one known coefficient")
        shift = 0
        if any(coeffs):
            while coeffs[shift] == 0:
                shift += 1
        object.__setattr__(self, "coefficients", coeffs[shift:])
        object.__setattr__(self, "leading_exponent", Fraction(self.leading_exponent) + shift)

    @property
    def precision(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return self.coefficients == (0,) * self.precision

    def coefficient(self, exponent) -> int:
        """Coefficient of q^exponent; exponent must lie in the known range"""
        offset = Fraction(exponent) - self.leading_exponent
        if offset.denominator != 1 or offset < 0:
            return 0
        if offset >= self.precision:
            raise DomainError(f"q^{exponent} is beyond the known precision")
        return self.coefficients[int(offset)]

    def array(self) -> np.ndarray:
        return _as_array(self.coefficients)

    def truncate(self, precision: int) -> "QExpansion":
        return QExpansion(self.leading_exponent, self.coefficients[:precision])

    def __mul__(self, other) -> "QExpansion":
        if isinstance(other, int):
            return QExpansion(self.leading_exponent, tuple(other * c for c in self.coefficients))
        return qexp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QExpansion":
        return qexp_pow(self, e)

    def __str__(self):
        shown = [f"{c:+d}q^{self.leading_exponent + i}" for i, c in enumerate(self.coefficients[:8]) if c]
        return " ".join(shown) + f" + O(q^{self.leading_exponent + self.precision})"


def _as_array(coeffs: Sequence[int]) -> np.ndarray:
    try:
        return np.array(coeffs, dtype=np.int64)
    except OverflowError:
        return np.array(coeffs, dtype=object)


def _convolve(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """First n coefficients of a*b, iterating over the sparser factor"""
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    nz = np.nonzero(a)[0]
    nz = nz[nz < n]
    if a.dtype != object and b.dtype != object and len(nz):
        bound = int(np.abs(a[nz]).astype(object).sum()) * int(np.abs(b[:n]).max(initial=0))
        if bound >= INT64_HEADROOM:
            a, b = a.astype(object), b.astype(object)
    out = np.zeros(n, dtype=a.dtype if a.dtype == object else b.dtype)
    for i in nz:
        width = min(n - i, len(b))
        out[i:i + width] += a[i] * b[:width]
    return out


def qexp_mul(f: QExpansion, g: QExpansion) -> QExpansion:
    n = min(f.precision, g.precision)
    coeffs = _convolve(f.array()[:n], g.array()[:n], n)
    return QExpansion(f.leading_exponent + g.leading_exponent, tuple(coeffs.tolist()))


def qexp_inverse(f: QExpansion) -> QExpansion:
    """1/f for a leading coefficient of +-1"""
    c0 = f.coefficients[0]
    if c0 not in (1, -1):
        raise DomainError(f"only unit leading coefficients are inverted over Z, got {c0}")
    n = f.precision
    a = [int(c) for c in f.coefficients]
    b = [0] * n
    b[0] = c0
    for k in range(1, n):
        b[k] = -c0 * sum(a[i] * b[k - i] for i in range(1, k + 1) if a[i])
    return QExpansion(-f.leading_exponent, tuple(b))


def qexp_pow(f: QExpansion, e: int) -> QExpansion:
    if e < 0:
        return qexp_pow(qexp_inverse(f), -e)
    result = QExpansion(Fraction(0), (1,) + (0,) * (f.precision - 1))
    base = f
    while e:
        if e & 1:
            result = qexp_mul(result, base)
        e >>= 1
        if e:
            base = qexp_mul(base, base)
    return result


def pentagonal_terms(limit: int) -> Iterable[Tuple[int, int]]:
    """(exponent, sign) of prod (1 - q^n) = sum (-1)^j q^(j(3j-1)/2) up to exponent < limit"""
    yield 0, 1
    j = 1
    while j * (3 * j - 1) // 2 < limit:
        sign = -1 if j % 2 else 1
        yield j * (3 * j - 1) // 2, sign
        if j * (3 * j + 1) // 2 < limit:
            yield j * (3 * j + 1) // 2, sign
        j += 1


@lru_cache(maxsize=32)
def eta_q(N: int, precision: int) -> QExpansion:
    """eta(N tau) = q^(N/24) prod (1 - q^(N n)), precision coefficients"""
    if N < 1 or precision < 1:
        raise DomainError(f"eta_q needs N >= 1 and precision >= 1, got N={N}, precision={precision}")
    coeffs = np.zeros(precision, dtype=np.int64)
    for exponent, sign in pentagonal_terms((precision + N - 1) // N):
        if N * exponent < precision:
            coeffs[N * exponent] = sign
    return QExpansion(Fraction(N, 24), tuple(coeffs.tolist()))


def eta_product(spec: Sequence[Tuple[int, int]], precision: int) -> QExpansion:
    """prod eta(N tau)^e over (N, e) in spec"""
    if not spec:
        raise DomainError("empty eta product")
    result = QExpansion(Fraction(0), (1,) + (0,) * (precision - 1))
    for N, e in spec:
        base = eta_q(N, precision) if e >= 0 else qexp_inverse(eta_q(N, precision))
        for _ in range(abs(e)):
            result = qexp_mul(result, base)
    return result
