"""Associated Legendre functions, Gauss-Legendre rules and angular-momentum coupling.

Conventions
-----------
``assoc_legendre`` returns the *unnormalized* associated Legendre function
with the Condon-Shortley phase, ``P_1^1(x) = -sqrt(1 - x^2)``.  Normalization
happens in :mod:`sphere_nse.harmonic_basis`.  The unnormalized values grow like
``(2m-1)!!`` and overflow float64 for ``m`` beyond roughly 150, which is far
above the truncations used here (``L <= 2N + 2`` with ``N <= 100``).

The Racah sum in :func:`wigner_3j` accumulates ``exp(log-factorial)`` terms
with ``math.fsum``.  This is accurate to a few ulps for ``j`` up to about 100;
past that the alternating sum loses digits and exact integer arithmetic
(``fractions.Fraction``) would be required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "GaussRule",
    "assoc_legendre",
    "assoc_legendre_table",
    "gauss_legendre",
    "wigner_3j",
    "clebsch_gordan",
    "clebsch_gordan_j1",
]


def assoc_legendre(L: int, m: int, x):
    """P_L^m(x) for 0 <= m <= L, Condon-Shortley phase included.

    Seeds the diagonal P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2} and runs the
    three-term recurrence upward in L.  ``x`` may be a scalar or an array.
    """
    if m < 0 or m > L:
        raise ValueError(f"order m={m} outside 0 <= m <= L={L}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("argument outside [-1, 1]")
    s = np.sqrt((1.0 - x) * (1.0 + x))
    pmm = np.ones_like(x)
    for k in range(1, m + 1):
        pmm = -(2 * k - 1) * s * pmm
    if L == m:
        return pmm[()] if pmm.ndim == 0 else pmm
    p_prev, p = pmm, (2 * m + 1) * x * pmm
    for ell in range(m + 2, L + 1):
        p_prev, p = p, ((2 * ell - 1) * x * p - (ell + m - 1) * p_prev) / (ell - m)
    return p[()] if p.ndim == 0 else p


def assoc_legendre_table(lmax: int, x) -> np.ndarray:
    """All P_L^m(x) for 0 <= m <= L <= lmax; shape (lmax+1, lmax+1, *x.shape).

    Indexed ``[L, m]``; entries with m > L are zero.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt((1.0 - x) * (1.0 + x))
    out = np.zeros((lmax + 1, lmax + 1) + x.shape)
    pmm = np.ones_like(x)
    for m in range(lmax + 1):
        if m > 0:
            pmm = -(2 * m - 1) * s * pmm
        out[m, m] = pmm
        if m + 1 <= lmax:
            out[m + 1, m] = (2 * m + 1) * x * pmm
        for ell in range(m + 2, lmax + 1):
            out[ell, m] = ((2 * ell - 1) * x * out[ell - 1, m]
                           - (ell + m - 1) * out[ell - 2, m]) / (ell - m)
    return out


@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre rule on [-1, 1] with nodes in increasing order."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p0, p1 = np.ones_like(x), x.copy()
    if n == 0:
        return p0, np.zeros_like(x)
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> GaussRule:
    """n-point Gauss-Legendre rule by Newton iteration on P_n.

    Initial guesses are the Chebyshev-like estimates cos(pi (i - 1/4)/(n + 1/2)).
    """
    if n < 1:
        raise ValueError("rule order must be positive")
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # Symmetrize: the rule is exactly symmetric, roundoff is not.
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    x, w = x[order], w[order]
    if n % 2 == 1:
        x[n // 2] = 0.0
    x.flags.writeable = False
    w.flags.writeable = False
    return GaussRule(n, x, w)


@lru_cache(maxsize=4096)
def _log_factorial(k: int) -> float:
    return math.lgamma(k + 1.0)


def wigner_3j(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    """Wigner 3j symbol for integer arguments via the Racah formula.

    Returns 0 when a selection rule fails (including |m_i| > j_i).
    """
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0.0

    lf = _log_factorial
    log_pref = 0.5 * (
        lf(j1 + j2 - j3) + lf(j1 - j2 + j3) + lf(-j1 + j2 + j3) - lf(j1 + j2 + j3 + 1)
        + lf(j1 + m1) + lf(j1 - m1) + lf(j2 + m2) + lf(j2 - m2) + lf(j3 + m3) + lf(j3 - m3)
    )
    t_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    t_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    terms = []
    for t in range(t_min, t_max + 1):
        log_den = (lf(t) + lf(j3 - j2 + t + m1) + lf(j3 - j1 + t - m2)
                   + lf(j1 + j2 - j3 - t) + lf(j1 - t - m1) + lf(j2 - t + m2))
        term = math.exp(log_pref - log_den)
        terms.append(-term if t % 2 else term)
    value = math.fsum(terms)
    if (j1 - j2 - m3) % 2:
        value = -value
    return value


def clebsch_gordan(j: int, m: int, j1: int, m1: int, j2: int, m2: int) -> float:
    """<j1 m1 j2 m2 | j m> = (-1)^(m + j1 - j2) sqrt(2j+1) (j1 j2 j; m1 m2 -m)."""
    if m1 + m2 != m:
        return 0.0
    if abs(m) > j or abs(m1) > j1 or abs(m2) > j2:
        return 0.0
    value = math.sqrt(2 * j + 1) * wigner_3j(j1, j2, j, m1, m2, -m)
    return -value if (m + j1 - j2) % 2 else value


def clebsch_gordan_j1(j: int, m: int, j1: int, m2: int) -> float:
    """Closed-form <j1, m - m2; 1, m2 | j, m> for coupling with a unit vector.

    Only the vector-coupling case j2 = 1 is needed for the gradient and curl
    expansions, so these are the textbook closed forms rather than the Racah sum.
    """
    m1 = m - m2
    if abs(m2) > 1 or abs(m) > j or abs(m1) > j1 or j < 0 or j1 < 0:
        return 0.0
    if j == j1 + 1:
        den = (2 * j1 + 1) * (2 * j1 + 2)
        if m2 == 1:
            return math.sqrt((j1 + m) * (j1 + m + 1) / den)
        if m2 == 0:
            return math.sqrt((j1 - m + 1) * (j1 + m + 1) / ((2 * j1 + 1) * (j1 + 1)))
        return math.sqrt((j1 - m) * (j1 - m + 1) / den)
    if j == j1:
        if j1 == 0:
            return 0.0
        den = 2 * j1 * (j1 + 1)
        if m2 == 1:
            return -math.sqrt((j1 + m) * (j1 - m + 1) / den)
        if m2 == 0:
            return m / math.sqrt(j1 * (j1 + 1))
        return math.sqrt((j1 - m) * (j1 + m + 1) / den)
    if j == j1 - 1:
        den = 2 * j1 * (2 * j1 + 1)
        if m2 == 1:
            return math.sqrt((j1 - m) * (j1 - m + 1) / den)
        if m2 == 0:
            return -math.sqrt((j1 - m) * (j1 + m) / (j1 * (2 * j1 + 1)))
        return math.sqrt((j1 + m + 1) * (j1 + m) / den)
    return 0.0
