"""Logarithmic Mahler measure m(P) = average of log|P| over the unit torus."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from scipy.stats import qmc

from mahler.laurent import LaurentPolynomial
from utils.errors import DomainError

TENSOR_TRAPEZOID = "tensor-trapezoid"
QUASI_MONTE_CARLO = "quasi-monte-carlo"
FAMILY_REDUCTION = "family-reduction"
JENSEN = "jensen"

CHUNK = 1 << 18
QMC_SEED = 20100


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    method: str
    converged: bool = True
    statistical: bool = False

    def __post_init__(self):
        if not math.isfinite(self.error_estimate) or self.error_estimate < 0:
            raise DomainError(f"bad error estimate {self.error_estimate}")
        if self.evaluations < 1:
            raise DomainError("a quadrature result needs at least one evaluation")

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "evaluations": self.evaluations,
            "method": self.method,
            "converged": self.converged,
            "statistical": self.statistical,
        }


def _univariate_jensen(coeffs: np.ndarray) -> float:
    """log|a_d| + sum log+|root| for coefficients in ascending order"""
    nz = np.nonzero(coeffs)[0]
    coeffs = coeffs[nz[0]:nz[-1] + 1]
    lead = abs(coeffs[-1])
    if len(coeffs) == 1:
        return math.log(lead)
    roots = np.roots(coeffs[::-1])
    return math.log(lead) + math.fsum(np.log(np.maximum(np.abs(roots), 1.0)))


def _jensen_exact(p: LaurentPolynomial) -> QuadratureResult:
    lo, hi = p.exponent_range(0)
    coeffs = np.zeros(hi - lo + 1)
    for c, e in p.terms:
        coeffs[e[0] - lo] = c
    value = _univariate_jensen(coeffs)
    return QuadratureResult(value, 1e-13 * (hi - lo + 1), 1, JENSEN)


def _trapezoid_level(p: LaurentPolynomial, n_grid: int, threads: int) -> Tuple[float, float]:
    """Mean of log|P| on the n_grid^nvars tensor grid, and min |P| seen"""
    nvars = len(p.variables)
    total = n_grid ** nvars
    roots = np.exp(2j * np.pi * np.arange(n_grid) / n_grid)
    shape = (n_grid,) * nvars

    def chunk(start: int) -> Tuple[float, float]:
        idx = np.arange(start, min(start + CHUNK, total))
        coords = np.unravel_index(idx, shape)
        vals = np.abs(p.evaluate([roots[c] for c in coords]))
        low = float(vals.min())
        with np.errstate(divide="ignore"):
            return float(np.sum(np.log(vals))), low

    starts = range(0, total, CHUNK)
    if threads > 1 and total > CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk, starts))
    else:
        parts = [chunk(s) for s in starts]
    return math.fsum(s for s, _ in parts) / total, min(m for _, m in parts)


def tensor_trapezoid(
    p: LaurentPolynomial, tol: float, max_points: int = 1 << 24, threads: int = 1
) -> Tuple[Optional[QuadratureResult], float]:
    """Grid doubling; returns (result or None when P seems to vanish on the torus, best value)"""
    nvars = len(p.variables)
    scale = math.fsum(abs(c) for c, _ in p.terms)
    n_grid = 8
    prev: Optional[float] = None
    prev_err: Optional[float] = None
    evaluations = 0
    best = float("nan")
    while n_grid ** nvars <= max_points:
        value, low = _trapezoid_level(p, n_grid, threads)
        evaluations += n_grid ** nvars
        if low <= 1e-12 * scale:
            logger.debug(f"{p}: |P| = {low:.3g} on the {n_grid}-grid, treating P as vanishing on the torus")
            return None, best
        best = value
        if prev is not None:
            err = abs(value - prev)
            logger.debug(f"trapezoid N={n_grid}: {value:.15f} (diff {err:.3g})")
            if err <= tol:
                return QuadratureResult(value, err, evaluations, TENSOR_TRAPEZOID), value
            # a log singularity near the torus shows up as algebraic, not geometric, decay
            if prev_err is not None and n_grid >= 64 and err > prev_err / 4:
                logger.debug(f"{p}: trapezoid stalled at N={n_grid}")
                return None, best
            prev_err = err
        prev = value
        n_grid *= 2
    logger.debug(f"{p}: trapezoid did not reach {tol} within {max_points} points")
    return None, best


def _jensen_variable(p: LaurentPolynomial) -> int:
    """Variable whose leading coefficient has the fewest terms"""
    best_key, best_i = None, 0
    for i in range(len(p.variables)):
        lo, hi = p.exponent_range(i)
        if lo == hi:
            continue
        lead = p.coefficients_in(i)[hi]
        key = (len(lead), hi - lo, i)
        if best_key is None or key < best_key:
            best_key, best_i = key, i
    return best_i


def _jensen_integrand(p: LaurentPolynomial, i: int, theta: np.ndarray) -> np.ndarray:
    """log|leading| + sum log+|roots| in variable i at angles theta of the other variables"""
    parts = p.coefficients_in(i)
    lo, hi = p.exponent_range(i)
    deg = hi - lo
    z = [np.exp(1j * theta[:, j]) for j in range(theta.shape[1])]
    batch = theta.shape[0]

    def coeff(k: int) -> np.ndarray:
        if k not in parts:
            return np.zeros(batch, dtype=complex)
        return np.broadcast_to(parts[k].evaluate(z), (batch,)).astype(complex)

    lead_poly = parts[hi]
    if lead_poly.is_monomial():
        log_lead = np.full(batch, math.log(abs(lead_poly.terms[0][0])))
    else:
        with np.errstate(divide="ignore"):
            log_lead = np.log(np.abs(coeff(hi)))
    a = [coeff(lo + k) for k in range(deg + 1)]
    lead = a[deg]
    with np.errstate(divide="ignore", invalid="ignore"):
        if deg == 1:
            roots = (-a[0] / lead)[:, None]
        elif deg == 2:
            disc = np.sqrt(a[1] * a[1] - 4 * a[2] * a[0])
            roots = np.stack([(-a[1] + disc) / (2 * lead), (-a[1] - disc) / (2 * lead)], axis=1)
        else:
            companion = np.zeros((batch, deg, deg), dtype=complex)
            for k in range(deg):
                companion[:, 0, k] = -a[deg - 1 - k] / lead
            companion[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
            roots = np.linalg.eigvals(companion)
        out = log_lead + np.sum(np.log(np.maximum(np.abs(roots), 1.0)), axis=1)
    # leading coefficient vanishing at a sample point is a measure-zero event
    return np.where(np.isfinite(out), out, 0.0)


def qmc_jensen(
    p: LaurentPolynomial,
    tol: float,
    max_points: int = 1 << 18,
    replicates: int = 16,
    threads: int = 1,
    seed: int = QMC_SEED,
) -> QuadratureResult:
    """Jensen's formula in one variable, scrambled Sobol points in the others"""
    if max_points < 1 << 10:
        raise DomainError(f"QMC needs at least 1024 points per replicate, got {max_points}")
    i = _jensen_variable(p)
    dim = len(p.variables) - 1
    logger.debug(f"QMC on {p}: Jensen in {p.variables[i]}, {dim}-dimensional Sobol")
    m = 10
    evaluations = 0
    value, err = float("nan"), float("inf")
    while (1 << m) <= max_points:
        def replicate(r: int) -> float:
            sampler = qmc.Sobol(d=dim, scramble=True, seed=seed + r)
            theta = 2 * np.pi * sampler.random_base2(m)
            return float(np.mean(_jensen_integrand(p, i, theta)))

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                estimates = np.array(list(pool.map(replicate, range(replicates))))
        else:
            estimates = np.array([replicate(r) for r in range(replicates)])
        evaluations += replicates << m
        value = math.fsum(estimates) / replicates
        err = 3.0 * float(np.std(estimates, ddof=1)) / math.sqrt(replicates)
        logger.debug(f"QMC 2^{m} x {replicates}: {value:.12f} +- {err:.3g}")
        if err <= tol:
            return QuadratureResult(value, err, evaluations, QUASI_MONTE_CARLO, True, True)
        m += 2
    logger.warning(f"QMC budget exhausted for {p}: best {value:.10f} +- {err:.3g} > {tol}")
    return QuadratureResult(value, err, evaluations, QUASI_MONTE_CARLO, False, True)


def mahler_measure(
    p: LaurentPolynomial,
    tol: float = 1e-6,
    threads: int = 1,
    max_points: int = 1 << 24,
    qmc_max_points: int = 1 << 18,
) -> QuadratureResult:
    if p.is_zero():
        raise DomainError("the Mahler measure of the zero polynomial is undefined")
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if p.is_monomial():
        return QuadratureResult(math.log(abs(p.terms[0][0])), 0.0, 1, JENSEN)
    active = [i for i in range(len(p.variables)) if p.exponent_range(i)[0] != p.exponent_range(i)[1]]
    if len(active) < len(p.variables):
        # variables entering only through a monomial factor do not change m(P)
        p = LaurentPolynomial(tuple((c, tuple(e[i] for i in active)) for c, e in p.terms), tuple(p.variables[i] for i in active))
    if len(p.variables) == 1:
        return _jensen_exact(p)
    result, _ = tensor_trapezoid(p, tol, max_points=max_points, threads=threads)
    if result is not None:
        return result
    return qmc_jensen(p, tol, max_points=qmc_max_points, threads=threads)
