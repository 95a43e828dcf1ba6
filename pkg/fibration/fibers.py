"""Singular fibers from discriminant valuations, and Shioda's rank formula."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from loguru import logger

from algebra.fields import QQ
from algebra.polynomial import ExactPolynomial, squarefree_factor
from fibration.curve import FunctionFieldCurve, check_weight, invariants, rescale_at_infinity
from utils.errors import DomainError, FieldMismatchError, InconsistencyError

ADDITIVE = "additive (not classified)"


@dataclass(frozen=True)
class FiberReport:
    """One singular fiber; place None stands for s = infinity, c4_valuation None for c4 = 0"""
    place: Optional[ExactPolynomial]
    delta_valuation: int
    c4_valuation: Optional[int]
    kodaira: str

    @property
    def is_infinity(self) -> bool:
        return self.place is None

    @property
    def degree(self) -> int:
        """Number of geometric fibers over the place"""
        return 1 if self.place is None else self.place.degree

    @property
    def is_multiplicative(self) -> bool:
        return self.kodaira != ADDITIVE

    @property
    def label(self) -> str:
        return "inf" if self.place is None else str(self.place)

    def as_dict(self) -> dict:
        return {
            "place": self.label,
            "degree": self.degree,
            "delta_valuation": self.delta_valuation,
            "c4_valuation": self.c4_valuation,
            "kodaira": self.kodaira,
        }


def kodaira_symbol(delta_valuation: int, c4_valuation: Optional[int]) -> str:
    if c4_valuation == 0:
        return f"I_{delta_valuation}"
    return ADDITIVE


def local_fiber(curve: FunctionFieldCurve, place: ExactPolynomial) -> FiberReport:
    """Fiber over one finite place (monic irreducible polynomial)"""
    inv = invariants(curve)
    place = place.monic()
    dv = inv.delta.valuation(place)
    cv = inv.c4.valuation(place)
    return FiberReport(place, dv, cv, kodaira_symbol(dv, cv))


def _fiber_at_infinity(curve: FunctionFieldCurve, weight: int) -> Optional[FiberReport]:
    at_inf = rescale_at_infinity(curve, weight)
    sigma = ExactPolynomial.gen(at_inf.var, at_inf.field)
    report = local_fiber(at_inf, sigma)
    if report.delta_valuation == 0:
        return None
    return FiberReport(None, report.delta_valuation, report.c4_valuation, report.kodaira)


def classify_fibers(curve: FunctionFieldCurve, weight: int) -> List[FiberReport]:
    """Singular fibers at every irreducible factor of the discriminant, then at infinity"""
    if curve.field != QQ:
        raise FieldMismatchError("fiber classification needs a curve over Q(s)")
    check_weight(curve, weight)
    inv = invariants(curve)
    reports: List[FiberReport] = []
    if inv.delta.degree > 0:
        for entry in squarefree_factor(inv.delta):
            if not entry.irreducible:
                logger.warning(f"Unsplit discriminant block {entry.factor} on {curve}; reporting it as one place")
            cv = inv.c4.valuation(entry.factor)
            reports.append(FiberReport(entry.factor, entry.multiplicity, cv, kodaira_symbol(entry.multiplicity, cv)))
    inf = _fiber_at_infinity(curve, weight)
    if inf is not None:
        reports.append(inf)
    logger.debug(f"{curve}: {len(reports)} singular places, valuation sum {valuation_sum(reports)}")
    return reports


def valuation_sum(reports: Sequence[FiberReport]) -> int:
    return sum(r.delta_valuation * r.degree for r in reports)


def component_counts(reports: Sequence[FiberReport]) -> List[int]:
    """m_nu per geometric fiber; I_n has n components"""
    counts: List[int] = []
    for r in reports:
        if not r.is_multiplicative:
            raise DomainError(f"component count of the additive fiber at {r.label} is not classified")
        counts.extend([r.delta_valuation] * r.degree)
    return counts


@dataclass(frozen=True)
class ShiodaInput:
    rho: int
    fiber_component_counts: List[int] = field(default_factory=list)

    def __post_init__(self):
        if self.rho < 2:
            raise DomainError(f"Picard number {self.rho} < 2")
        if any(m < 1 for m in self.fiber_component_counts):
            raise DomainError("every fiber has at least one component")


def shioda_rank(data: ShiodaInput) -> int:
    """r = rho - 2 - sum(m_nu - 1)"""
    r = data.rho - 2 - sum(m - 1 for m in data.fiber_component_counts)
    if r < 0:
        raise InconsistencyError(f"negative Mordell-Weil rank {r} from rho = {data.rho}")
    return r
