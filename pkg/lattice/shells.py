"""Square-shell summation over Z^2 minus the origin."""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple

import numpy as np
from loguru import logger

from utils.errors import DomainError

SHELLS_PER_BLOCK = 64
GAUSS_NODES = 48

Summand = Callable[[np.ndarray, np.ndarray], np.ndarray]


def shell_points(r: int) -> Tuple[np.ndarray, np.ndarray]:
    """The 8r points with max(|k|, |m|) = r, in a fixed order"""
    if r < 1:
        raise DomainError(f"shell index must be positive, got {r}")
    side = np.arange(-r, r + 1, dtype=np.float64)
    inner = np.arange(-r + 1, r, dtype=np.float64)
    k = np.concatenate([np.full_like(side, r), np.full_like(side, -r), inner, inner])
    m = np.concatenate([side, side, np.full_like(inner, r), np.full_like(inner, -r)])
    return k, m


def _block(summand: Summand, first: int, last: int) -> List[complex]:
    out = []
    for r in range(first, last + 1):
        k, m = shell_points(r)
        out.append(complex(np.sum(summand(k, m))))
    return out


def shell_partials(summand: Summand, radius: int, threads: int = 1) -> List[complex]:
    """Per-shell sums for shells 1..radius, ascending; independent of the thread count"""
    if radius < 1:
        raise DomainError(f"radius must be at least 1, got {radius}")
    starts = list(range(1, radius + 1, SHELLS_PER_BLOCK))
    ranges = [(s, min(s + SHELLS_PER_BLOCK - 1, radius)) for s in starts]
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda rng: _block(summand, *rng), ranges))
    else:
        blocks = [_block(summand, *rng) for rng in ranges]
    return [v for block in blocks for v in block]


def shell_sum(summand: Summand, radius: int, threads: int = 1) -> complex:
    partials = shell_partials(summand, radius, threads)
    total = complex(math.fsum(p.real for p in partials), math.fsum(p.imag for p in partials))
    logger.debug(f"summed {radius} shells ({4 * radius * (radius + 1)} points)")
    return total


def min_eigenvalue(form: Sequence[int]) -> float:
    """Smallest eigenvalue of A k^2 + B k m + C m^2"""
    a, b, c = form
    return (a + c) / 2.0 - math.hypot((a - c) / 2.0, b / 2.0)


def octant_nodes(n: int = GAUSS_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre angles and weights covering [0, 2pi) octant by octant"""
    x, w = np.polynomial.legendre.leggauss(n)
    half = math.pi / 8
    thetas, weights = [], []
    for j in range(8):
        mid = (2 * j + 1) * half
        thetas.append(mid + half * x)
        weights.append(half * w)
    return np.concatenate(thetas), np.concatenate(weights)


def homogeneous_tail(
    angular: Callable[[np.ndarray], np.ndarray], degree: float, radius: int, n: int = GAUSS_NODES
) -> float:
    """Integral of rho^degree * angular(theta) outside the box [-R-1/2, R+1/2]^2"""
    if degree >= -2:
        raise DomainError(f"homogeneous degree {degree} does not give a convergent tail")
    theta, w = octant_nodes(n)
    half_side = radius + 0.5
    start = half_side / np.maximum(np.abs(np.cos(theta)), np.abs(np.sin(theta)))
    radial = start ** (degree + 2) / -(degree + 2)
    return float(np.sum(w * angular(theta) * radial))

