"""Exact coefficient fields: Q and quadratic extensions Q(sqrt d)."""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from utils.errors import DomainError, FieldMismatchError

# Python's Fraction already keeps gcd(num, den) = 1 and den >= 1.
ExactRational = Fraction

Scalar = Union[int, Fraction, "QuadFieldElement"]


def is_squarefree(d: int) -> bool:
    if d in (0, 1):
        return False
    n = abs(d)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None"""
    x = Fraction(x)
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QuadFieldElement:
    """a + b*sqrt(d) with rational a, b and square-free d"""
    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _coerce(self, other) -> "QuadFieldElement":
        if isinstance(other, QuadFieldElement):
            if other.d != self.d:
                raise FieldMismatchError(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadFieldElement(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadFieldElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadFieldElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadFieldElement(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadFieldElement":
        return QuadFieldElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadFieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        c = self.conjugate()
        return QuadFieldElement(c.a / n, c.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadFieldElement(Fraction(1), Fraction(0), self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadFieldElement):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __complex__(self):
        root = complex(self.d) ** 0.5
        return complex(float(self.a)) + float(self.b) * root

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.d}))"


def quad_sqrt(x: QuadFieldElement) -> Optional[QuadFieldElement]:
    """Square root inside Q(sqrt d), or None when x is not a square there"""
    d = x.d
    if not x:
        return QuadFieldElement(0, 0, d)
    if x.b == 0:
        r = rational_sqrt(x.a)
        if r is not None:
            return QuadFieldElement(r, 0, d)
        r = rational_sqrt(x.a / d)
        if r is not None:
            return QuadFieldElement(0, r, d)
        return None
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    # (u + v sqrt d)^2 = x  gives  u^2 = (a +- n)/2 and v = b/(2u)
    for cand in ((x.a + n) / 2, (x.a - n) / 2):
        u = rational_sqrt(cand)
        if u:
            root = QuadFieldElement(u, x.b / (2 * u), d)
            if root * root == x:
                return root
    return None


class RationalField:
    """The field Q; elements are Fractions"""
    d = 1
    name = "Q"

    def coerce(self, x) -> Fraction:
        if isinstance(x, QuadFieldElement):
            if x.b != 0:
                raise FieldMismatchError(f"{x!r} is not rational")
            return x.a
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise FieldMismatchError(f"cannot coerce {type(x).__name__} into Q")

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def sqrt(self, x) -> Optional[Fraction]:
        return rational_sqrt(self.coerce(x))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


@dataclass(frozen=True)
class QuadraticField:
    """The field Q(sqrt d); elements are QuadFieldElement"""
    d: int

    def __post_init__(self):
        if not is_squarefree(self.d):
            raise DomainError(f"d = {self.d} must be square-free and different from 0, 1")

    @property
    def name(self) -> str:
        return f"Q(sqrt({self.d}))"

    def coerce(self, x) -> QuadFieldElement:
        if isinstance(x, QuadFieldElement):
            if x.d != self.d:
                raise FieldMismatchError(f"{x!r} does not live in {self.name}")
            return x
        if isinstance(x, (int, Fraction)):
            return QuadFieldElement(Fraction(x), Fraction(0), self.d)
        raise FieldMismatchError(f"cannot coerce {type(x).__name__} into {self.name}")

    def element(self, a, b=0) -> QuadFieldElement:
        return QuadFieldElement(Fraction(a), Fraction(b), self.d)

    @property
    def generator(self) -> QuadFieldElement:
        return self.element(0, 1)

    @property
    def zero(self) -> QuadFieldElement:
        return self.element(0)

    @property
    def one(self) -> QuadFieldElement:
        return self.element(1)

    def sqrt(self, x) -> Optional[QuadFieldElement]:
        return quad_sqrt(self.coerce(x))


QQ = RationalField()

Field = Union[RationalField, QuadraticField]
