"""Lattice sums of rational functions over binary quadratic forms."""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Tuple

import numpy as np
from loguru import logger

from algebra.fields import QuadraticField, quad_sqrt
from lattice.characters import DirichletChar, dirichlet_L, kronecker_character
from lattice.shells import homogeneous_tail, min_eigenvalue, shell_sum
from mahler.laurent import LaurentPolynomial, parse_laurent
from utils.errors import DomainError, InconsistencyError

LATTICE_VARIABLES = ("k", "m")


class LatticeSum(NamedTuple):
    """value: truncated sum; tail_bound: rigorous bound on the omitted part;
    tail_estimate: continuum approximation of the omitted part"""
    value: float
    tail_bound: float
    tail_estimate: float

    @property
    def corrected(self) -> float:
        return self.value + self.tail_estimate

    def scaled(self, c: float) -> "LatticeSum":
        return LatticeSum(c * self.value, abs(c) * self.tail_bound, c * self.tail_estimate)

    def __add__(self, other: "LatticeSum") -> "LatticeSum":
        return LatticeSum(
            self.value + other.value, self.tail_bound + other.tail_bound, self.tail_estimate + other.tail_estimate
        )

    def __sub__(self, other: "LatticeSum") -> "LatticeSum":
        return self + other.scaled(-1.0)


def numerator(text: str) -> LaurentPolynomial:
    """Polynomial numerator in k and m, e.g. "k^2 - 2*m^2" """
    poly = parse_laurent(text, LATTICE_VARIABLES)
    if any(e < 0 for _, exps in poly.terms for e in exps):
        raise DomainError(f"numerator {text!r} has negative exponents")
    return poly


@dataclass(frozen=True)
class LatticeSumSpec:
    """sum over (k, m) != 0 with max(|k|, |m|) <= radius of num(k, m) / (A k^2 + B k m + C m^2)^s"""
    quad_form: Tuple[int, int, int]
    numerator: LaurentPolynomial
    s_exponent: float
    radius: int

    def __post_init__(self):
        a, b, c = self.quad_form
        if a <= 0 or 4 * a * c - b * b <= 0:
            raise DomainError(f"form {self.quad_form} is not positive definite")
        if self.radius < 1:
            raise DomainError(f"radius must be at least 1, got {self.radius}")
        if self.numerator.variables != LATTICE_VARIABLES:
            raise DomainError(f"numerator must be in {LATTICE_VARIABLES}, got {self.numerator.variables}")
        if self.numerator.is_zero():
            raise DomainError("zero numerator")
        if self.degree - 2 * self.s_exponent >= -2:
            raise DomainError(
                f"divergent lattice sum: numerator degree {self.degree}, exponent {self.s_exponent}"
            )

    @classmethod
    def of(cls, form: Tuple[int, int, int], num: str, s: float, radius: int) -> "LatticeSumSpec":
        return cls(tuple(form), numerator(num), float(s), int(radius))

    @property
    def degree(self) -> int:
        return max(sum(e) for _, e in self.numerator.terms)

    def with_radius(self, radius: int) -> "LatticeSumSpec":
        return LatticeSumSpec(self.quad_form, self.numerator, self.s_exponent, radius)

    def summand(self, k: np.ndarray, m: np.ndarray) -> np.ndarray:
        a, b, c = self.quad_form
        q = a * k * k + b * k * m + c * m * m
        num = np.zeros_like(k)
        for coeff, (i, j) in self.numerator.terms:
            num = num + coeff * k ** i * m ** j
        return num / q ** self.s_exponent

    def tail_bound(self) -> float:
        d, s = self.degree, self.s_exponent
        weight = math.fsum(abs(c) for c, _ in self.numerator.terms)
        const = 8 * weight * 2 ** (d / 2) / min_eigenvalue(self.quad_form) ** s
        return const * self.radius ** (d + 2 - 2 * s) / (2 * s - d - 2)

    def tail_estimate(self) -> float:
        a, b, c = self.quad_form
        s = self.s_exponent
        total = 0.0
        for coeff, (i, j) in self.numerator.terms:
            def angular(theta: np.ndarray, i=i, j=j, coeff=coeff) -> np.ndarray:
                x, y = np.cos(theta), np.sin(theta)
                return coeff * x ** i * y ** j / (a * x * x + b * x * y + c * y * y) ** s

            total += homogeneous_tail(angular, i + j - 2 * s, self.radius)
        return total


def lattice_sum(spec: LatticeSumSpec, threads: int = 1) -> LatticeSum:
    value = shell_sum(spec.summand, spec.radius, threads).real
    result = LatticeSum(value, spec.tail_bound(), spec.tail_estimate())
    logger.debug(
        f"lattice sum {spec.numerator} / {spec.quad_form}^{spec.s_exponent} at R={spec.radius}: "
        f"{value:.15f} (tail ~ {result.tail_estimate:.3g}, bound {result.tail_bound:.3g})"
    )
    return result


def central_value(radius: int = 4096, threads: int = 1) -> LatticeSum:
    """S = (1/2) sum' (k^2 - 2m^2) / (k^2 + 2m^2)^3, the value L(f, 3)"""
    return lattice_sum(LatticeSumSpec.of((1, 0, 2), "k^2 - 2*m^2", 3, radius), threads).scaled(0.5)


def d3(radius: int = 1024, threads: int = 1, tol: float = 1e-8) -> float:
    """d_3 by the character route, cross-checked against (2 sqrt 3 / pi^3) sum' 1/(m^2 + 3k^2)^2"""
    by_character = 3 * math.sqrt(3) / (4 * math.pi) * dirichlet_L(kronecker_character(-3), 2.0).value
    lattice = lattice_sum(LatticeSumSpec.of((3, 0, 1), "1", 2, radius), threads)
    by_lattice = 2 * math.sqrt(3) / math.pi ** 3 * lattice.corrected
    diff = abs(by_character - by_lattice)
    logger.debug(f"d3: character {by_character:.15f}, lattice {by_lattice:.15f}, |diff| = {diff:.3g}")
    if diff > tol:
        raise InconsistencyError(f"d3 routes disagree by {diff:.3g} > {tol}")
    return by_character


def zagier_A(s: float, radius: int = 4096, threads: int = 1) -> LatticeSum:
    """sum' (1/(k^2 + 18m^2)^s - 1/(2k^2 + 9m^2)^s)"""
    if s <= 1:
        raise DomainError(f"A(s) needs s > 1, got {s}")
    plus = lattice_sum(LatticeSumSpec.of((1, 0, 18), "1", s, radius), threads)
    minus = lattice_sum(LatticeSumSpec.of((2, 0, 9), "1", s, radius), threads)
    return plus - minus


def zagier_A_product(s: float) -> float:
    """2 L(chi_-3, s) L(chi_24, s)"""
    return 2 * dirichlet_L(kronecker_character(-3), s).value * dirichlet_L(kronecker_character(24), s).value


def b_factor(s: float) -> float:
    return 1 + 2 / 3 ** s + 27 / 3 ** (2 * s)


def b_factor_exact(s: int) -> Fraction:
    return 1 + Fraction(2, 3 ** s) + Fraction(27, 3 ** (2 * s))


class BIdentity(NamedTuple):
    lhs: float
    rhs: float
    tail_bound: float
    factor: float


def zagier_B_identity(s: float, radius: int = 4096, threads: int = 1) -> BIdentity:
    """Both sides of sum'(k^2-18m^2)/(k^2+18m^2)^s + sum'(9m^2-2k^2)/(9m^2+2k^2)^s
    = (1 + 2/3^s + 27/3^(2s)) sum'(m^2-2k^2)/(m^2+2k^2)^s, tail-corrected"""
    if s < 3:
        raise DomainError(f"the B identity needs s >= 3, got {s}")
    first = lattice_sum(LatticeSumSpec.of((1, 0, 18), "k^2 - 18*m^2", s, radius), threads)
    second = lattice_sum(LatticeSumSpec.of((2, 0, 9), "9*m^2 - 2*k^2", s, radius), threads)
    base = lattice_sum(LatticeSumSpec.of((2, 0, 1), "m^2 - 2*k^2", s, radius), threads)
    factor = b_factor(s)
    lhs = first + second
    rhs = base.scaled(factor)
    return BIdentity(lhs.corrected, rhs.corrected, lhs.tail_bound + rhs.tail_bound, factor)


def _form_counts(form: Tuple[int, int, int], n_max: int) -> np.ndarray:
    """#{(k, m) != 0 : A k^2 + C m^2 = n} for n <= n_max (diagonal forms)"""
    a, b, c = form
    if b:
        raise DomainError("only diagonal forms are tabulated")
    counts = np.zeros(n_max + 1, dtype=np.int64)
    k_max = math.isqrt(n_max // a)
    m_max = math.isqrt(n_max // c)
    k = np.arange(-k_max, k_max + 1)
    for m in range(-m_max, m_max + 1):
        values = a * k * k + c * m * m
        values = values[values <= n_max]
        counts += np.bincount(values, minlength=n_max + 1)[: n_max + 1]
    counts[0] = 0
    return counts


def r_n(n: int) -> int:
    """(1/2) #{(k, m) : k^2 + 2m^2 = n}"""
    if n < 1:
        raise DomainError(f"r_n needs n >= 1, got {n}")
    count = 0
    for m in range(-math.isqrt(n // 2), math.isqrt(n // 2) + 1):
        rest = n - 2 * m * m
        root = math.isqrt(rest)
        if root * root == rest:
            count += 2 if root else 1
    return count // 2


def r_n_table(n_max: int) -> np.ndarray:
    """r_0 = 0, r_1, ..., r_{n_max}"""
    return _form_counts((1, 0, 2), n_max) // 2


def divisor_character_table(chi: DirichletChar, n_max: int) -> np.ndarray:
    """sum over d | n of chi(d), for n = 0..n_max (entry 0 unused)"""
    out = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        value = chi(d)
        if value:
            out[d::d] += value
    out[0] = 0
    return out


class ACoefficients(NamedTuple):
    lattice: np.ndarray
    character: np.ndarray


def zagier_A_coefficients(n_max: int) -> ACoefficients:
    """Dirichlet coefficients of A(s) from the two forms, and 2 (-3/n) r_n"""
    lattice = _form_counts((1, 0, 18), n_max) - _form_counts((2, 0, 9), n_max)
    character = 2 * kronecker_character(-3).table(n_max) * r_n_table(n_max)
    character[0] = 0
    return ACoefficients(lattice, character)


def theorem_constant(det_t: int):
    """(1/9) |det T|^(3/2) as an exact element of Q(sqrt d)"""
    det_t = abs(det_t)
    root = None
    for d in (2, 3, 5, 6, 7):
        root = quad_sqrt(QuadraticField(d).coerce(det_t))
        if root is not None:
            break
    if root is None:
        raise DomainError(f"sqrt({det_t}) is not in a small quadratic field")
    return root * det_t / 9


def exact_constant_check(det_t: int = 72) -> bool:
    """(1/9) 72^(3/2) = 48 sqrt 2, decided in Q(sqrt 2); squares: 72^3 / 81 = 4608 = (48 sqrt 2)^2"""
    value = theorem_constant(det_t)
    expected = QuadraticField(2).element(0, 48)
    squares_agree = Fraction(det_t ** 3, 81) == (expected * expected).a
    return value == expected and squares_agree
