"""Point counts of the quartic Y: xyz(x+y+z) + t^2(xy+xz+yz) - 10xyzt = 0 and Frobenius traces."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from algebra.symbols import kronecker_symbol, primes_up_to
from counting.fields import Elements, FiniteField, broadcast
from modular.newform import cm_trace
from utils.errors import DomainError, InconsistencyError

K = 10
MAX_P_R1 = 97
MAX_P_R2 = 13
BRUTEFORCE_MAX_Q = 150
BOUNDARY_CORRECTION = (20, -4)  # N(Y_10) = N(Y') + 20 q - 4

CSV_COLUMNS = ("p", "r", "q", "N_Yprime", "N_Y10", "A_q", "cm_A", "match", "cong_N", "cong_A")


def _chunks(n: int, parts: int) -> List[Tuple[int, int]]:
    step = max(1, -(-n // parts))
    return [(s, min(s + step, n)) for s in range(0, n, step)]


def _count_z_chart(F: FiniteField, xs: Elements, ys: Elements) -> int:
    """Roots z != 0 of xy z^2 + (x^2 y + x y^2 + x + y - 10xy) z + xy, summed over the (x, y) grid"""
    x, y = broadcast(xs, 0, 2), broadcast(ys, 1, 2)
    xy = F.mul(x, y)
    b = F.add(F.add(F.mul(xy, F.add(x, y)), F.add(x, y)), F.scale(-K, xy))
    # a = c = xy is a unit, so z = 0 is never a root and the root count is 1 + chi(b^2 - 4 xy^2)
    disc = F.sub(F.mul(b, b), F.scale(4, F.mul(xy, xy)))
    chi = F.quadratic_character(disc)
    return int(np.sum(1 + chi))


def count_Yprime(F: FiniteField, threads: int = 1) -> int:
    """#{(x, y, z) in (F_q^*)^3 on the t = 1 chart}"""
    if F.r == 1 and F.p > MAX_P_R1 or F.r == 2 and F.p > MAX_P_R2:
        raise DomainError(f"{F} is beyond the counting budget")
    units = F.units()
    pieces = [((units[0][s:e], units[1][s:e])) for s, e in _chunks(len(units[0]), max(1, threads))]
    if threads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda xs: _count_z_chart(F, xs, units), pieces))
    else:
        counts = [_count_z_chart(F, xs, units) for xs in pieces]
    total = sum(counts)
    logger.debug(f"N({F}, Y') = {total}")
    return total


def _roots_in_units(F: FiniteField, a: Elements, b: Elements, c: Elements) -> np.ndarray:
    """Number of T != 0 with a T^2 + b T + c = 0, elementwise"""
    q = F.q
    a0, b0, c0 = F.is_zero(a), F.is_zero(b), F.is_zero(c)
    chi = F.quadratic_character(F.sub(F.mul(b, b), F.scale(4, F.mul(a, c))))
    quadratic = 1 + chi - c0.astype(np.int64)
    linear = np.where(c0, 0, 1)
    degenerate = np.where(c0, q - 1, 0)
    return np.where(~a0, quadratic, np.where(~b0, linear, degenerate))


def count_Yprime_oracle(F: FiniteField) -> int:
    """Same set through the z = 1 chart: (X, Y, T) = (x/z, y/z, 1/z), quadratic in T"""
    units = F.units()
    X, Y = broadcast(units, 0, 2), broadcast(units, 1, 2)
    XY = F.mul(X, Y)
    one = F.constant(1)
    a = F.add(XY, F.add(X, Y))
    b = F.scale(-K, XY)
    c = F.mul(XY, F.add(F.add(X, Y), one))
    return int(np.sum(_roots_in_units(F, a, b, c)))


def count_Yprime_bruteforce(F: FiniteField) -> int:
    """Direct scan of (F_q^*)^3"""
    if F.q > BRUTEFORCE_MAX_Q:
        raise DomainError(f"brute force over {F} is too slow")
    units = F.units()
    x, y, z = (broadcast(units, axis, 3) for axis in range(3))
    xyz = F.mul(F.mul(x, y), z)
    quartic = F.mul(xyz, F.add(F.add(x, y), z))
    pairs = F.add(F.add(F.mul(x, y), F.mul(x, z)), F.mul(y, z))
    value = F.sub(F.add(quartic, pairs), F.scale(K, xyz))
    return int(np.count_nonzero(F.is_zero(value)))


@dataclass(frozen=True)
class Symbols:
    six: int
    minus_three: int
    three: int
    two: int

    @classmethod
    def at(cls, p: int) -> "Symbols":
        return cls(kronecker_symbol(6, p), kronecker_symbol(-3, p), kronecker_symbol(3, p), kronecker_symbol(2, p))


def trace_from_count(p: int, r: int, n_y10: int) -> int:
    """A_q = N - 1 - q^2 - 17q - 2q (6/p)^r - q (-3/p)^r"""
    if p in (2, 3):
        raise DomainError(f"p = {p} is excluded")
    q = p ** r
    s = Symbols.at(p)
    return n_y10 - 1 - q * q - 17 * q - 2 * q * s.six ** r - q * s.minus_three ** r


def check_congruence(p: int, r: int, n_y10: int, a_q: int) -> Tuple[bool, bool]:
    if p in (2, 3):
        raise DomainError(f"p = {p} is excluded")
    q = p ** r
    s = Symbols.at(p)
    six, m3, three, two = s.six ** r, s.minus_three ** r, s.three ** r, s.two ** r
    n_rhs = 4 * q - 4 + three + two - 2 * six
    a_rhs = 3 - q * q + 3 * q - q * (2 * six + m3) + three + two - 2 * six
    return (n_y10 - n_rhs) % 8 == 0, (a_q - a_rhs) % 8 == 0


@dataclass(frozen=True)
class CountReport:
    p: int
    r: int
    N_Yprime: int
    N_Y10: int
    A_q: int
    legendre_6: int
    legendre_m3: int
    legendre_3: int
    legendre_2: int

    def __post_init__(self):
        q = self.p ** self.r
        slope, offset = BOUNDARY_CORRECTION
        if self.N_Y10 != self.N_Yprime + slope * q + offset:
            raise InconsistencyError(f"N(Y_10) = {self.N_Y10} but N(Y') + 20q - 4 = {self.N_Yprime + slope * q + offset}")
        if self.N_Yprime < 0:
            raise InconsistencyError(f"negative count {self.N_Yprime}")

    @property
    def q(self) -> int:
        return self.p ** self.r

    def congruences(self) -> Tuple[bool, bool]:
        return check_congruence(self.p, self.r, self.N_Y10, self.A_q)


def count_report(F: FiniteField, threads: int = 1) -> CountReport:
    n_prime = count_Yprime(F, threads)
    slope, offset = BOUNDARY_CORRECTION
    n_y10 = n_prime + slope * F.q + offset
    s = Symbols.at(F.p)
    return CountReport(F.p, F.r, n_prime, n_y10, trace_from_count(F.p, F.r, n_y10), s.six, s.minus_three, s.three, s.two)


def expected_trace(p: int, r: int) -> int:
    """A_p from the CM dichotomy, and A_{p^2} = A_p^2 - 2 sign p^2 from lambda_1 lambda_2 = sign p^2"""
    record = cm_trace(p)
    if r == 1:
        return record.A_p
    return record.A_p ** 2 - 2 * record.middle_sign * p * p


@dataclass
class DichotomyReport:
    reports: List[CountReport] = field(default_factory=list)
    expected: Dict[Tuple[int, int], int] = field(default_factory=dict)
    mismatches: List[Tuple[int, int]] = field(default_factory=list)
    congruence_failures: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.congruence_failures


def verify_dichotomy(p_max: int, r2_p_max: int = 7, threads: int = 1) -> DichotomyReport:
    """Counted A_q against the CM traces for 5 <= p <= p_max (r = 1) and p <= r2_p_max (r = 2)"""
    if p_max > MAX_P_R1 or r2_p_max > MAX_P_R2:
        raise DomainError(f"budget: p_max <= {MAX_P_R1}, r2_p_max <= {MAX_P_R2}")
    out = DichotomyReport()
    for p in primes_up_to(p_max):
        if p < 5:
            continue
        for r in (1, 2) if p <= r2_p_max else (1,):
            report = count_report(FiniteField(p, r), threads)
            want = expected_trace(p, r)
            out.reports.append(report)
            out.expected[(p, r)] = want
            if report.A_q != want:
                logger.warning(f"A_{report.q}: counted {report.A_q}, CM trace {want}")
                out.mismatches.append((p, r))
            if not all(report.congruences()):
                logger.warning(f"mod-8 congruence fails at p = {p}, r = {r}")
                out.congruence_failures.append((p, r))
    logger.info(f"dichotomy up to p = {p_max}: {len(out.reports)} counts, {len(out.mismatches)} mismatches")
    return out


def report_rows(reports: List[CountReport], expected: Optional[Dict[Tuple[int, int], int]] = None) -> List[dict]:
    rows = []
    for rep in reports:
        cm_a = (expected or {}).get((rep.p, rep.r))
        if cm_a is None:
            cm_a = expected_trace(rep.p, rep.r)
        cong_n, cong_a = rep.congruences()
        rows.append(
            dict(
                zip(
                    CSV_COLUMNS,
                    (rep.p, rep.r, rep.q, rep.N_Yprime, rep.N_Y10, rep.A_q, cm_a, rep.A_q == cm_a, cong_n, cong_a),
                )
            )
        )
    return rows
