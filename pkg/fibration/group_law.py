"""Chord-tangent group law and section checks over K(s)."""
from dataclasses import dataclass
from typing import NamedTuple, Optional

from algebra.fields import Field
from algebra.polynomial import ExactPolynomial, RationalFunction, poly_gcd, rational_function_sqrt
from fibration.curve import FunctionFieldCurve
from utils.errors import DomainError


@dataclass(frozen=True)
class CurvePoint:
    """(X : Y : Z) with polynomial entries, normalized so that Z is monic and gcd(X, Y, Z) = 1"""
    X: ExactPolynomial
    Y: ExactPolynomial
    Z: ExactPolynomial

    def __post_init__(self):
        X, Y, Z = self.X, self.Y, self.Z
        X._check(Y), X._check(Z)
        if Z.is_zero():
            if not X.is_zero() or Y.is_zero():
                raise DomainError("only (0 : 1 : 0) lies at infinity on a Weierstrass model")
            X, Y = X, ExactPolynomial.constant(1, Y.var, Y.field)
        else:
            g = poly_gcd(poly_gcd(X, Y), Z)
            if g.degree > 0:
                X, Y, Z = X.exact_div(g), Y.exact_div(g), Z.exact_div(g)
            lead = Z.leading
            inv = lead.inverse() if hasattr(lead, "inverse") else 1 / lead
            X, Y, Z = X.scale(inv), Y.scale(inv), Z.scale(inv)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "Z", Z)

    @classmethod
    def infinity(cls, var: str = "s", field: Field = None) -> "CurvePoint":
        kw = {} if field is None else {"field": field}
        zero = ExactPolynomial.zero(var, **kw)
        return cls(zero, ExactPolynomial.constant(1, var, **kw), zero)

    @classmethod
    def from_affine(cls, x: RationalFunction, y: RationalFunction) -> "CurvePoint":
        common = x.den * y.den.exact_div(poly_gcd(x.den, y.den))
        return cls(x.num * common.exact_div(x.den), y.num * common.exact_div(y.den), common)

    @property
    def is_infinity(self) -> bool:
        return self.Z.is_zero()

    @property
    def var(self) -> str:
        return self.Z.var if not self.is_infinity else self.Y.var

    @property
    def field(self) -> Field:
        return self.Y.field

    @property
    def x(self) -> RationalFunction:
        return RationalFunction(self.X, self.Z)

    @property
    def y(self) -> RationalFunction:
        return RationalFunction(self.Y, self.Z)

    def over(self, field: Field) -> "CurvePoint":
        return CurvePoint(self.X.over(field), self.Y.over(field), self.Z.over(field))

    def __str__(self):
        return f"({self.X} : {self.Y} : {self.Z})"


def _align(curve: FunctionFieldCurve, P: CurvePoint) -> FunctionFieldCurve:
    if P.var != curve.var:
        raise DomainError(f"point in {P.var} on a curve in {curve.var}")
    return curve.over(P.field) if P.field != curve.field else curve


def curve_equation(curve: FunctionFieldCurve, X, Y, Z):
    a1, a2, a3, a4, a6 = curve.coefficients
    return (Y * Y * Z + a1 * X * Y * Z + a3 * Y * Z * Z) - (X * X * X + a2 * X * X * Z + a4 * X * Z * Z + a6 * Z * Z * Z)


def verify_section(curve: FunctionFieldCurve, P: CurvePoint) -> RationalFunction:
    """Exact residual of the projective curve equation at P; zero iff P is on the curve"""
    curve = _align(curve, P)
    return RationalFunction.of(curve_equation(curve, P.X, P.Y, P.Z))


def is_on_curve(curve: FunctionFieldCurve, P: CurvePoint) -> bool:
    return verify_section(curve, P).is_zero()


def negate(curve: FunctionFieldCurve, P: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return P
    curve = _align(curve, P)
    x, y = P.x, P.y
    return CurvePoint.from_affine(x, -y - x * curve.a1 - curve.a3)


def _add(curve: FunctionFieldCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = curve.coefficients
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if (y1 + y2 + x1 * a1 + a3).is_zero():
            return CurvePoint.infinity(P.var, P.field)
        den = y1 * 2 + x1 * a1 + a3
        lam = (x1 * x1 * 3 + x1 * a2 * 2 + a4 - y1 * a1) / den
        nu = (-(x1 * x1 * x1) + x1 * a4 + a6 * 2 - y1 * a3) / den
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + lam * a1 - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint.from_affine(x3, y3)


def group_add(curve: FunctionFieldCurve, P: CurvePoint, Q: CurvePoint, check: bool = True) -> CurvePoint:
    curve = _align(curve, P)
    if check:
        for name, pt in (("P", P), ("Q", Q)):
            if not is_on_curve(curve, pt):
                raise DomainError(f"{name} = {pt} is not on {curve}")
    return _add(curve, P, Q)


def multiply(curve: FunctionFieldCurve, P: CurvePoint, n: int) -> CurvePoint:
    curve = _align(curve, P)
    if not is_on_curve(curve, P):
        raise DomainError(f"{P} is not on {curve}")
    if n < 0:
        return multiply(curve, negate(curve, P), -n)
    result = CurvePoint.infinity(P.var, P.field)
    base = P
    while n:
        if n & 1:
            result = _add(curve, result, base)
        base = _add(curve, base, base)
        n >>= 1
    return result


def point_order(curve: FunctionFieldCurve, P: CurvePoint, bound: int = 12) -> Optional[int]:
    """Smallest n <= bound with nP = O, None if P has no such order"""
    curve = _align(curve, P)
    acc = P
    for n in range(1, bound + 1):
        if acc.is_infinity:
            return n
        acc = _add(curve, acc, P)
    return None


class YRecovery(NamedTuple):
    exists: bool
    discriminant: RationalFunction
    y: Optional[RationalFunction]


def recover_y(curve: FunctionFieldCurve, X, Z, field: Field = None) -> YRecovery:
    """Solve the curve equation for Y given X and Z over the coefficient field of X (or `field`)"""
    X, Z = RationalFunction.of(X), RationalFunction.of(Z)
    if Z.is_zero():
        raise DomainError("recover_y needs Z != 0")
    target = field or X.field
    curve = curve.over(target)
    X, Z = X.over(target) if X.field != target else X, Z.over(target) if Z.field != target else Z
    a1, a2, a3, a4, a6 = curve.coefficients
    b = X * Z * a1 + Z * Z * a3
    rhs = X * X * X + X * X * Z * a2 + X * Z * Z * a4 + Z * Z * Z * a6
    disc = b * b + Z * rhs * 4
    root = rational_function_sqrt(disc)
    if root is None:
        return YRecovery(False, disc, None)
    return YRecovery(True, disc, (root - b) / (Z * 2))
