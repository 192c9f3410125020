"""
Analytic side of the ladder structure: characteristic functions, the
ascending ladder generating function and the Wiener-Hopf identity

    1 - phi(theta) = (1 - G_asc(e^{i theta})) (1 - G_desc(e^{-i theta})),

with G_desc(z) = 1 - sqrt(1 - z) for every admissible step distribution.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from o2gasket.core.config import settings
from o2gasket.core.exceptions import LadderAnomalyError, PreconditionError, TruncationFailureError
from o2gasket.schemas.series import GSequence, TruncationConfig
from o2gasket.services.oracle.convolution import exact_convolution_powers
from o2gasket.services.series.coefficients import FCoefficients, coefficients_for
from o2gasket.services.series.windows import h_down_array, h_down_exact, sqrt_ladder_coeffs
from o2gasket.services.weights.distributions import NuDistribution, SeriesNu

logger = logging.getLogger(__name__)

# Forward differences kept in the Euler transform of a coefficient tail
EULER_ORDER = 4
DEFAULT_LADDER_TERMS = 10_000
DIRECT_CHAR_START = 1024
# complex entries per block of the theta x l power matrix
CIRCLE_BLOCK = 1 << 22


def _circle_powers(thetas: np.ndarray, ells: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.outer(thetas, ells))


def f_on_circle_grid(fc: FCoefficients, thetas: ArrayLike, cfg: Optional[TruncationConfig] = None) -> np.ndarray:
    """
    f(e^{i theta}) = sum_l f_l z^l for every theta of the grid.

    The a/l part is summed as -a log(1 - z). The rest, b_l = f_l - a/l, is
    summed up to N and its tail by the Euler transform; with the fourth
    difference of b single-signed past N the tail error is at most
    |Delta^4 b_N| / |1 - z|^5, and N doubles until that is below tol.
    """
    cfg = cfg or TruncationConfig()
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if np.any(np.cos(thetas) == 1.0):
        raise PreconditionError("f(z) diverges at z = 1")
    z = np.exp(1j * thetas)
    gap = np.abs(1.0 - z)
    a = fc.leading_coefficient
    N = max(8 * fc.support, 64)
    while True:
        ells = np.arange(1, N + EULER_ORDER + 2, dtype=float)
        corrected = fc.corrected_values(ells)
        delta = abs(float(np.diff(corrected[N:N + EULER_ORDER + 1], EULER_ORDER)[0]))
        bound = float(np.max(2.0 * delta / gap ** (EULER_ORDER + 1)))
        if bound <= cfg.target_abs_tol:
            break
        if N >= cfg.max_terms:
            raise TruncationFailureError(
                f"f series tail {bound:.3e} above {cfg.target_abs_tol:.1e} at {N} terms", achieved=bound, terms=N
            )
        N = min(2 * N, cfg.max_terms)
    out = np.empty(thetas.shape, dtype=complex)
    rows = max(1, CIRCLE_BLOCK // N)
    for start in range(0, thetas.size, rows):
        block = slice(start, start + rows)
        out[block] = _circle_powers(thetas[block], ells[:N]) @ corrected[:N]
    # index i of ``corrected`` holds l = i + 1
    out += np.array([zk * euler_tail(corrected, N, zk) for zk in z])
    if a != 0.0:
        out += -a * np.log(1.0 - z)
    logger.debug(f"f on {thetas.size} circle points with N={N}, tail bound {bound:.1e}")
    return out


def f_on_circle(fc: FCoefficients, theta: float, cfg: Optional[TruncationConfig] = None) -> complex:
    return complex(f_on_circle_grid(fc, [theta], cfg)[0])


def _direct_char(nu: NuDistribution, thetas: np.ndarray, cfg: TruncationConfig) -> np.ndarray:
    K = DIRECT_CHAR_START
    while nu.tail_mass(K) > cfg.target_abs_tol:
        if K >= cfg.max_terms:
            raise TruncationFailureError(
                f"characteristic function tail {nu.tail_mass(K):.3e} above tolerance", achieved=nu.tail_mass(K), terms=K
            )
        K = min(2 * K, cfg.max_terms)
    ks, values = nu.window(K)
    return np.array([complex(np.sum(values * np.exp(1j * theta * ks))) for theta in thetas])


def char_fn_grid(nu: NuDistribution, thetas: ArrayLike, cfg: Optional[TruncationConfig] = None) -> np.ndarray:
    """
    E exp(i theta X) for X ~ nu over a grid of theta.

    Closed forms are used when the distribution has one; distributions built
    from a ring sequence go through 1 - phi = 2|sin(theta/2)| e^{-i theta} f(e^{i theta});
    anything else is summed directly until the tail mass drops below tol.
    """
    cfg = cfg or TruncationConfig()
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    out = np.ones(thetas.shape, dtype=complex)
    closed = [nu.characteristic(float(t)) for t in thetas]
    if all(value is not None for value in closed):
        return np.array(closed, dtype=complex)
    moving = np.cos(thetas) != 1.0
    if not np.any(moving):
        return out
    fc = nu.coefficients
    if fc is None:
        out[moving] = _direct_char(nu, thetas[moving], cfg)
        return out
    t = thetas[moving]
    f = f_on_circle_grid(fc, t, cfg)
    out[moving] = 1.0 - 2.0 * np.abs(np.sin(t / 2.0)) * np.exp(-1j * t) * f
    return out


def char_fn(nu: NuDistribution, theta: float, cfg: Optional[TruncationConfig] = None) -> complex:
    """E exp(i theta X) for X ~ nu"""
    return complex(char_fn_grid(nu, [theta], cfg)[0])


def asc_ladder_series(g: GSequence, N: int, tol: Optional[float] = None) -> np.ndarray:
    """
    First N coefficients of the weak ascending ladder height generating
    function, G(z) = 1 - sqrt(1 - z) f(z) / z.

    Raises LadderAnomalyError at the first coefficient below -tol, which
    signals a ring sequence that does not come from an admissible family.
    """
    if N < 1:
        raise PreconditionError(f"need at least one coefficient, got N = {N}")
    tol = settings.NEGATIVITY_TOL if tol is None else tol
    fc = coefficients_for(g)
    f_shifted = fc.values(np.arange(1, N + 1, dtype=float))
    # sqrt(1 - z) = sum_k h_down(k) z^k / (1 - 2k)
    sqrt_series = h_down_array(N) / (1.0 - 2.0 * np.arange(N))
    one_minus = np.convolve(sqrt_series, f_shifted)[:N]
    coeffs = -one_minus
    coeffs[0] += 1.0
    negative = np.nonzero(coeffs < -tol)[0]
    if negative.size:
        index = int(negative[0])
        raise LadderAnomalyError(index, float(coeffs[index]))
    total = math.fsum(coeffs.tolist())
    if total > 1.0 + tol:
        logger.warning(f"ascending ladder partial sum {total!r} exceeds 1")
    return coeffs


def euler_tail(coeffs: np.ndarray, start: int, z: complex, order: int = EULER_ORDER) -> complex:
    """
    sum_{n >= start} a_n z^n by the Euler transform
    z^start sum_p (Delta^p a)_start z^p / (1 - z)^{p + 1}.
    """
    window = np.asarray(coeffs[start:start + order + 1], dtype=float)
    if window.size < order + 1:
        raise PreconditionError(f"Euler transform of order {order} needs {order + 1} coefficients past {start}")
    total = 0j
    w = 1.0 - z
    diffs = window
    for p in range(order + 1):
        total += diffs[0] * z**p / w ** (p + 1)
        diffs = np.diff(diffs)
    return z**start * total


def wiener_hopf_residual(
    g: GSequence,
    theta_grid: Sequence[float],
    cfg: Optional[TruncationConfig] = None,
    N: int = DEFAULT_LADDER_TERMS,
) -> float:
    """sup over the grid of |1 - phi - (1 - G_asc(e^{i theta}))(1 - G_desc(e^{-i theta}))|"""
    cfg = cfg or TruncationConfig()
    if any(math.isclose(math.cos(t), 1.0, rel_tol=0.0, abs_tol=1e-15) for t in theta_grid):
        raise PreconditionError("theta grid must avoid multiples of 2 pi")
    nu = SeriesNu(g, cfg)
    coeffs = asc_ladder_series(g, N + EULER_ORDER + 1)
    thetas = np.asarray(theta_grid, dtype=float)
    z = np.exp(1j * thetas)
    ascending = _circle_powers(thetas, np.arange(N, dtype=float)) @ coeffs[:N]
    ascending += np.array([euler_tail(coeffs, N, zk) for zk in z])
    descending = np.sqrt(1.0 - np.conj(z))
    lhs = 1.0 - char_fn_grid(nu, thetas, cfg)
    worst = float(np.max(np.abs(lhs - (1.0 - ascending) * descending))) if thetas.size else 0.0
    logger.debug(f"Wiener-Hopf residual over {len(theta_grid)} points: {worst:.3e}")
    return worst


@dataclass(frozen=True)
class PreRenewalResult:
    residual: float
    omitted_bound: float
    sums: List[Fraction]

    @property
    def total(self) -> float:
        return self.residual + self.omitted_bound


def pre_renewal_check(depth: int, ell_max: int) -> PreRenewalResult:
    """
    Compare sum_{p <= depth} mu^{*p}(l) with h_down(l) for l <= ell_max, where
    mu is the strict descending ladder height law, in exact arithmetic.

    mu^{*p} lives on [p, inf), so nothing is omitted once depth >= ell_max;
    otherwise the omitted terms are bounded by rho^{depth+1} / (1 - rho)
    with rho = sum_{k <= ell_max} mu_k.
    """
    if depth < 1:
        raise PreconditionError(f"depth must be >= 1, got {depth}")
    mu = sqrt_ladder_coeffs(ell_max + 1)
    table = exact_convolution_powers(mu, depth, ell_max)
    sums = [sum((table[p][ell] for p in range(depth + 1)), Fraction(0)) for ell in range(ell_max + 1)]
    residual = max(abs(s - h_down_exact(ell)) for ell, s in enumerate(sums))
    if depth >= ell_max:
        bound = 0.0
    else:
        rho = float(sum(mu, Fraction(0)))
        bound = rho ** (depth + 1) / (1.0 - rho)
    return PreRenewalResult(residual=float(residual), omitted_bound=bound, sums=sums)
