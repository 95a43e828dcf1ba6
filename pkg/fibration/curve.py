"""Long Weierstrass curves over a rational function field K(s)."""
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Tuple

from algebra.fields import QQ, Field
from algebra.polynomial import ExactPolynomial, RationalFunction
from utils.errors import DomainError, FieldMismatchError


class CurveInvariants(NamedTuple):
    b2: ExactPolynomial
    b4: ExactPolynomial
    b6: ExactPolynomial
    b8: ExactPolynomial
    c4: ExactPolynomial
    c6: ExactPolynomial
    delta: ExactPolynomial
    j: RationalFunction


@dataclass(frozen=True)
class FunctionFieldCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with polynomial coefficients"""
    a1: ExactPolynomial
    a2: ExactPolynomial
    a3: ExactPolynomial
    a4: ExactPolynomial
    a6: ExactPolynomial
    name: str = ""

    def __post_init__(self):
        ref = self.a1
        for a in self.coefficients[1:]:
            if a.var != ref.var or a.field != ref.field:
                raise FieldMismatchError(f"curve {self.name or '?'} mixes variables or fields")
        if invariants(self).delta.is_zero():
            raise DomainError(f"curve {self.name or '?'} is singular: discriminant vanishes identically")

    @classmethod
    def from_lists(cls, a1, a2, a3, a4, a6, var: str = "s", field: Field = QQ, name: str = "") -> "FunctionFieldCurve":
        make = lambda c: ExactPolynomial(tuple(c), var, field)
        return cls(make(a1), make(a2), make(a3), make(a4), make(a6), name)

    @property
    def coefficients(self) -> Tuple[ExactPolynomial, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def var(self) -> str:
        return self.a1.var

    @property
    def field(self) -> Field:
        return self.a1.field

    def over(self, field: Field) -> "FunctionFieldCurve":
        if field == self.field:
            return self
        return FunctionFieldCurve(*(a.over(field) for a in self.coefficients), name=self.name)

    def __str__(self):
        return self.name or "[" + ", ".join(str(a) for a in self.coefficients) + "]"


@lru_cache(maxsize=64)
def invariants(curve: FunctionFieldCurve) -> CurveInvariants:
    a1, a2, a3, a4, a6 = curve.coefficients
    b2 = a1 * a1 + a2.scale(4)
    b4 = a4.scale(2) + a1 * a3
    b6 = a3 * a3 + a6.scale(4)
    b8 = a1 * a1 * a6 + a2 * a6.scale(4) - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - b4.scale(24)
    c6 = -(b2 ** 3) + (b2 * b4).scale(36) - b6.scale(216)
    delta = -(b2 * b2 * b8) - (b4 ** 3).scale(8) - (b6 * b6).scale(27) + (b2 * b4 * b6).scale(9)
    j = RationalFunction(c4 ** 3, delta) if not delta.is_zero() else None
    return CurveInvariants(b2, b4, b6, b8, c4, c6, delta, j)


def check_weight(curve: FunctionFieldCurve, weight: int) -> None:
    if weight < 1:
        raise DomainError(f"weight must be at least 1, got {weight}")
    for i, a in zip((1, 2, 3, 4, 6), curve.coefficients):
        if a.degree > i * weight:
            raise DomainError(f"weight {weight} too small: deg a{i} = {a.degree} > {i * weight}")


def rescale_at_infinity(curve: FunctionFieldCurve, weight: int, var: str = "sigma") -> FunctionFieldCurve:
    """a_i <- sigma^(i*weight) a_i(1/sigma)"""
    check_weight(curve, weight)
    rescaled = [a.reverse(i * weight).rename(var) for i, a in zip((1, 2, 3, 4, 6), curve.coefficients)]
    return FunctionFieldCurve(*rescaled, name=f"{curve.name}@inf" if curve.name else "")


def invariant_ratio(curve: FunctionFieldCurve, other: FunctionFieldCurve, name: str = "delta"):
    """Constant c with inv(curve) = c * inv(other) for inv in {delta, c4, c6}, or None"""
    if name not in ("delta", "c4", "c6"):
        raise DomainError(f"no invariant named {name!r}")
    if curve.var != other.var:
        other = FunctionFieldCurve(*(a.rename(curve.var) for a in other.coefficients), name=other.name)
    mine, theirs = getattr(invariants(curve), name), getattr(invariants(other), name)
    if theirs.is_zero():
        return curve.field.zero if mine.is_zero() else None
    q, r = divmod(mine, theirs)
    if not r.is_zero() or not q.is_constant():
        return None
    return q.coeff(0)
