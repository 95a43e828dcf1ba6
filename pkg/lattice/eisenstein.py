"""Eisenstein-Kronecker series for m(P_k) and its rational specialization at k = 10.

With z = m j tau + n the dilation-j term is w_j (1/(z^3 zbar) + 1/(z zbar^3) + 1/(z zbar)^2),
and m(P_k) = (Im tau / 8 pi^3) times the weighted sum over (m, n) != 0.
At tau = i/sqrt 2 the squared norms |m j tau + kappa|^2 are the positive forms
(m^2 + 2 kappa^2)/2, 2m^2 + kappa^2, (9m^2 + 2 kappa^2)/2 and 18m^2 + kappa^2,
and the sum becomes four integer lattice sums.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np
from loguru import logger

from lattice.shells import shell_sum
from lattice.sums import LatticeSum, LatticeSumSpec, lattice_sum
from utils.errors import DomainError, InconsistencyError

DILATION_WEIGHTS: Tuple[Tuple[int, int], ...] = ((1, -4), (2, 16), (3, -36), (6, 144))
TAU_K10 = 1j / math.sqrt(2)
IMAGINARY_RESIDUE_LIMIT = 1e-12

# (weight, form in (kappa, m), numerator) for the k = 10 specialization, weights already
# multiplied by the 4 that clears the halves in D_tau and D_3tau
SPECIALIZED_TERMS = (
    (-16, (2, 0, 1), "6*k^2 - m^2"),
    (16, (1, 0, 2), "3*k^2 - 2*m^2"),
    (-144, (2, 0, 9), "6*k^2 - 9*m^2"),
    (144, (1, 0, 18), "3*k^2 - 18*m^2"),
)


@dataclass(frozen=True)
class EisensteinSpec:
    tau: complex
    dilation_weights: Tuple[Tuple[int, int], ...] = DILATION_WEIGHTS
    radius: int = 4096

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError(f"tau must lie in the upper half-plane, got {self.tau}")
        if self.radius < 1:
            raise DomainError(f"radius must be at least 1, got {self.radius}")
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "dilation_weights", tuple((int(j), int(w)) for j, w in self.dilation_weights))

    def summand(self, n: np.ndarray, m: np.ndarray) -> np.ndarray:
        total = np.zeros(n.shape, dtype=complex)
        for j, w in self.dilation_weights:
            z = m * (j * self.tau) + n
            zb = np.conj(z)
            total += w * (1.0 / (z ** 3 * zb) + 1.0 / (z * zb ** 3) + 1.0 / (z * zb) ** 2)
        return total

    def tail_bound(self) -> float:
        """Each term is at most 3|w| / |z|^4 and |z|^2 >= lambda_j (m^2 + n^2)"""
        bound = 0.0
        for j, w in self.dilation_weights:
            t = j * self.tau
            lam = _min_eig(abs(t) ** 2, t.real, 1.0)
            bound += 3 * abs(w) * 4 / (lam ** 2 * self.radius ** 2)
        return bound * self.tau.imag / (8 * math.pi ** 3)


def _min_eig(a: float, b_half: float, c: float) -> float:
    return (a + c) / 2 - math.hypot((a - c) / 2, b_half)


class EisensteinValue(NamedTuple):
    value: float
    imaginary_residue: float
    tail_bound: float


def eisenstein_mahler(spec: EisensteinSpec, threads: int = 1) -> EisensteinValue:
    total = shell_sum(spec.summand, spec.radius, threads)
    prefactor = spec.tau.imag / (8 * math.pi ** 3)
    value, residue = prefactor * total.real, prefactor * abs(total.imag)
    if residue > IMAGINARY_RESIDUE_LIMIT:
        raise InconsistencyError(f"imaginary residue {residue:.3g} in the Eisenstein sum at tau = {spec.tau}")
    logger.debug(f"Eisenstein sum at tau = {spec.tau}, R = {spec.radius}: {value:.15f}")
    return EisensteinValue(value, residue, spec.tail_bound())


def half_lattice_sum(spec: EisensteinSpec) -> float:
    """The same sum over the half lattice m > 0 or (m = 0, n > 0)"""
    total = []
    r = spec.radius
    n = np.arange(-r, r + 1, dtype=np.float64)
    for m in range(1, r + 1):
        total.append(complex(np.sum(spec.summand(n, np.full_like(n, m)))).real)
    pos = np.arange(1, r + 1, dtype=np.float64)
    total.append(complex(np.sum(spec.summand(pos, np.zeros_like(pos)))).real)
    return math.fsum(total) * spec.tau.imag / (8 * math.pi ** 3)


def specialized_m10(radius: int = 4096, threads: int = 1) -> LatticeSum:
    """m(P_10) as (sqrt 2 / 16 pi^3) times four integer lattice sums"""
    if radius < 1:
        raise DomainError(f"radius must be at least 1, got {radius}")
    prefactor = math.sqrt(2) / (16 * math.pi ** 3)
    total = LatticeSum(0.0, 0.0, 0.0)
    for weight, form, num in SPECIALIZED_TERMS:
        part = lattice_sum(LatticeSumSpec.of(form, num, 3, radius), threads)
        total = total + part.scaled(weight * prefactor)
    return total


def norm_forms(tau: complex = TAU_K10, weights: Sequence[Tuple[int, int]] = DILATION_WEIGHTS):
    """|m j tau + kappa|^2 as (coefficient of m^2, coefficient of kappa^2) per dilation"""
    out = []
    for j, _ in weights:
        t = j * complex(tau)
        if abs(t.real) > 1e-15:
            raise DomainError("norm forms are diagonal only for tau on the imaginary axis")
        out.append((abs(t) ** 2, 1.0))
    return out
