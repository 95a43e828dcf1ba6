"""Univariate polynomials and rational functions over Q or Q(sqrt d)."""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from algebra.fields import QQ, Field, QuadFieldElement, QuadraticField
from utils.errors import DomainError, FieldMismatchError

# degree of the zero polynomial
ZERO_DEGREE = -1


def _trim(coeffs: Sequence) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class ExactPolynomial:
    """Dense polynomial, coefficients indexed by degree"""
    coeffs: tuple
    var: str = "s"
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim([self.field.coerce(c) for c in self.coeffs]))

    @classmethod
    def zero(cls, var: str = "s", field: Field = QQ) -> "ExactPolynomial":
        return cls((), var, field)

    @classmethod
    def constant(cls, c, var: str = "s", field: Field = QQ) -> "ExactPolynomial":
        return cls((c,), var, field)

    @classmethod
    def gen(cls, var: str = "s", field: Field = QQ) -> "ExactPolynomial":
        return cls((0, 1), var, field)

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "s", field: Field = QQ) -> "ExactPolynomial":
        x = cls.gen(var, field)
        return reduce(lambda acc, r: acc * (x - r), roots, cls.constant(1, var, field))

    # -- basic queries

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self) -> Iterator:
        return iter(self.coeffs)

    # -- coercion

    def _like(self, coeffs: Sequence) -> "ExactPolynomial":
        return ExactPolynomial(tuple(coeffs), self.var, self.field)

    def _check(self, other) -> "ExactPolynomial":
        if isinstance(other, ExactPolynomial):
            if other.var != self.var:
                raise FieldMismatchError(f"variable {self.var} vs {other.var}")
            if other.field != self.field:
                raise FieldMismatchError(f"field {self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction, QuadFieldElement)):
            return self._like((other,))
        return NotImplemented

    def over(self, field: Field) -> "ExactPolynomial":
        """Same polynomial read over a larger field"""
        return ExactPolynomial(self.coeffs, self.var, field)

    def rename(self, var: str) -> "ExactPolynomial":
        return ExactPolynomial(self.coeffs, var, self.field)

    # -- ring operations

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return self._like([self.coeff(i) + o.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return self._like(())
        out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExactPolynomial":
        if n < 0:
            raise DomainError("negative power of a polynomial")
        result = self._like((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "ExactPolynomial":
        c = self.field.coerce(c)
        return self._like([c * a for a in self.coeffs])

    def shift(self, n: int) -> "ExactPolynomial":
        """Multiply by var^n"""
        if not self.coeffs:
            return self
        return self._like((self.field.zero,) * n + self.coeffs)

    def __divmod__(self, other) -> Tuple["ExactPolynomial", "ExactPolynomial"]:
        o = self._check(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise DomainError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = o.degree
        inv_lead = 1 / o.leading if not isinstance(o.leading, QuadFieldElement) else o.leading.inverse()
        quot = [self.field.zero] * max(len(rem) - dq, 1)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv_lead
            quot[k] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return self._like(quot), self._like(rem[:dq] if dq > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "ExactPolynomial":
        q, r = divmod(self, other)
        if r:
            raise DomainError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "ExactPolynomial":
        if not self.coeffs:
            return self
        lead = self.leading
        inv = lead.inverse() if isinstance(lead, QuadFieldElement) else 1 / lead
        return self.scale(inv)

    def derivative(self) -> "ExactPolynomial":
        return self._like([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reverse(self, n: int) -> "ExactPolynomial":
        """var^n * p(1/var); n must be at least the degree"""
        if self.degree > n:
            raise DomainError(f"degree {self.degree} exceeds reversal length {n}")
        padded = list(self.coeffs) + [self.field.zero] * (n + 1 - len(self.coeffs))
        return self._like(padded[::-1])

    def valuation(self, place: "ExactPolynomial") -> Optional[int]:
        """Order of vanishing along a monic irreducible place; None for the zero polynomial"""
        if self.is_zero():
            return None
        if place.is_constant():
            raise DomainError("a place must have positive degree")
        n, p = 0, self
        while True:
            q, r = divmod(p, place)
            if r:
                return n
            n, p = n + 1, q

    def sort_key(self) -> tuple:
        """Canonical order: degree, then coefficients from the top"""
        return (self.degree, tuple(_coeff_key(c) for c in reversed(self.coeffs)))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts: List[str] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if isinstance(c, QuadFieldElement) and c.b != 0:
                text = f"{c!r}" + (f"*{mono}" if mono else "")
                parts.append(("+ " if parts else "") + text)
                continue
            value = c.a if isinstance(c, QuadFieldElement) else c
            sign = "-" if value < 0 else "+"
            mag = abs(value)
            if mono and mag == 1:
                text = mono
            elif mono:
                text = f"{mag}*{mono}"
            else:
                text = f"{mag}"
            if parts:
                parts.append(f"{sign} {text}")
            else:
                parts.append(text if sign == "+" else f"-{text}")
        return " ".join(parts)


def _coeff_key(c) -> tuple:
    if isinstance(c, QuadFieldElement):
        return (c.a, c.b)
    return (c, Fraction(0))


def poly_gcd(p: ExactPolynomial, q: ExactPolynomial) -> ExactPolynomial:
    """Monic gcd; gcd(0, 0) is 0"""
    q = p._check(q)
    a, b = p, q
    while b:
        a, b = b, a % b
    return a.monic()


def poly_arith(p: ExactPolynomial, q: ExactPolynomial, op: str):
    """Dispatch one exact ring operation by name"""
    if op == "+":
        return p + q
    if op == "-":
        return p - q
    if op in ("*", "×"):
        return p * q
    if op in ("divmod", "÷rem"):
        return divmod(p, q)
    if op == "gcd":
        return poly_gcd(p, q)
    raise DomainError(f"unknown polynomial operation {op!r}")


def poly_sqrt(p: ExactPolynomial) -> Optional[ExactPolynomial]:
    """Exact square root over the coefficient field, or None"""
    if p.is_zero():
        return p
    n = p.degree
    if n % 2:
        return None
    m = n // 2
    r = p.field.sqrt(p.leading)
    if r is None:
        return None
    two_r = 2 * r
    g = [p.field.zero] * (m + 1)
    g[m] = r
    for k in range(1, m + 1):
        target = n - k
        acc = p.coeff(target)
        for i in range(m - k + 1, m + 1):
            j = target - i
            if m - k < j <= m:
                acc = acc - g[i] * g[j]
        g[m - k] = acc / two_r
    root = p._like(g)
    return root if root * root == p else None


@dataclass(frozen=True)
class Factor:
    """One entry of a factorization; unpacks as (factor, multiplicity)"""
    factor: ExactPolynomial
    multiplicity: int
    irreducible: bool = True

    def __iter__(self):
        return iter((self.factor, self.multiplicity))


def _int_divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _integer_coeffs(p: ExactPolynomial) -> List[int]:
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in p.coeffs), 1)
    return [int(c * den) for c in p.coeffs]


def rational_roots(p: ExactPolynomial) -> List[Fraction]:
    """Distinct rational roots of a polynomial over Q"""
    if p.field != QQ:
        raise FieldMismatchError("rational root search needs a polynomial over Q")
    if p.is_constant():
        return []
    roots: List[Fraction] = []
    ints = _integer_coeffs(p)
    low = next(i for i, c in enumerate(ints) if c)
    if low:
        roots.append(Fraction(0))
        ints = ints[low:]
    if len(ints) == 1:
        return roots
    for num in _int_divisors(ints[0]):
        for den in _int_divisors(ints[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and not p(cand):
                    roots.append(cand)
    return sorted(roots)


def _yun(f: ExactPolynomial) -> List[Tuple[ExactPolynomial, int]]:
    df = f.derivative()
    a0 = poly_gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    blocks = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            blocks.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return blocks


def squarefree_factor(p: ExactPolynomial) -> List[Factor]:
    """Monic factors with multiplicity; pieces of degree above 3 without rational roots stay as flagged blocks"""
    if p.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    if p.field != QQ:
        raise FieldMismatchError("squarefree_factor works over Q")
    out: List[Factor] = []
    x = ExactPolynomial.gen(p.var)
    for block, mult in _yun(p.monic()):
        rest = block
        for r in rational_roots(block):
            out.append(Factor(x - r, mult))
            rest = rest.exact_div(x - r)
        if rest.degree > 0:
            # no rational roots: irreducible through degree 3
            out.append(Factor(rest.monic(), mult, irreducible=rest.degree <= 3))
    return sorted(out, key=lambda f: f.factor.sort_key())


def expand_factors(factors: Iterable[Factor], constant=1, var: str = "s") -> ExactPolynomial:
    acc = ExactPolynomial.constant(constant, var)
    for f in factors:
        acc = acc * f.factor ** f.multiplicity
    return acc


@dataclass(frozen=True)
class RationalFunction:
    """num/den in lowest terms with monic denominator"""
    num: ExactPolynomial
    den: ExactPolynomial

    def __post_init__(self):
        num, den = self.num, self.den
        num._check(den)
        if den.is_zero():
            raise DomainError("rational function with zero denominator")
        if num.is_zero():
            den = ExactPolynomial.constant(1, den.var, den.field)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lead = den.leading
            inv = lead.inverse() if isinstance(lead, QuadFieldElement) else 1 / lead
            num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, p) -> "RationalFunction":
        if isinstance(p, RationalFunction):
            return p
        return cls(p, ExactPolynomial.constant(1, p.var, p.field))

    @property
    def var(self) -> str:
        return self.num.var

    @property
    def field(self) -> Field:
        return self.num.field

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, ExactPolynomial):
            return RationalFunction.of(other)
        if isinstance(other, (int, Fraction, QuadFieldElement)):
            return RationalFunction.of(ExactPolynomial.constant(other, self.var, self.field))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __bool__(self):
        return not self.is_zero()

    def valuation(self, place: ExactPolynomial) -> Optional[int]:
        v = self.num.valuation(place)
        if v is None:
            return None
        return v - self.den.valuation(place)

    def over(self, field: Field) -> "RationalFunction":
        return RationalFunction(self.num.over(field), self.den.over(field))

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def rational_function_sqrt(f: RationalFunction) -> Optional[RationalFunction]:
    """Square root of a reduced fraction; both parts must be squares"""
    num = poly_sqrt(f.num)
    if num is None:
        return None
    den = poly_sqrt(f.den)
    if den is None:
        return None
    return RationalFunction(num, den)


def parse_coefficient(token: str, field: Field):
    """'a' or 'a:b' (meaning a + b*sqrt d); a and b are integers or fractions"""
    if ":" in token:
        if not isinstance(field, QuadraticField):
            raise DomainError(f"coefficient {token!r} needs a quadratic field")
        a, b = token.split(":", 1)
        return field.element(Fraction(a), Fraction(b))
    return field.coerce(Fraction(token))
