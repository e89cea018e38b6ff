"""Scalar spherical harmonics and the divergence-free vector basis Z_{L,m}.

Vectors are expressed in the covariant spherical basis

    e_{+1} = -(x + i y)/sqrt(2),   e_0 = z,   e_{-1} = (x - i y)/sqrt(2),

and stored as arrays whose last axis holds the components in the order
``(+1, 0, -1)`` (see :data:`COMPONENTS`).  The basis is orthonormal for the
Hermitian product, so ``v . conj(w) = sum_mu v_mu conj(w_mu)``.

Harmonics follow the quantum-mechanics convention: P_L^m carries the
Condon-Shortley phase and Y_{L,-m} = (-1)^m conj(Y_{L,m}).

    Grad Y_{L,m}    = sum_mu B_mu e_mu,
    x × Grad Y_{L,m} = sum_mu D_mu e_mu,
    Z_{L,m} = lambda_L^{-1/2} Curl Y_{L,m} = -lambda_L^{-1/2} x × Grad Y_{L,m},

where every B_mu, D_mu is a real function of colatitude times
``exp(i (m - mu) phi)`` (D carries an extra factor i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special_functions import assoc_legendre, assoc_legendre_table, clebsch_gordan, clebsch_gordan_j1

COMPONENTS = (1, 0, -1)

_S2 = 1.0 / math.sqrt(2.0)
# Rows are e_{+1}, e_0, e_{-1} as Cartesian vectors.
COVARIANT_BASIS = np.array([
    [-_S2, -1j * _S2, 0.0],
    [0.0, 0.0, 1.0],
    [_S2, -1j * _S2, 0.0],
])


def eigenvalue(L):
    """Stokes eigenvalue L(L+1)."""
    return L * (L + 1)


@dataclass(frozen=True)
class ModeIndex:
    """Flat indexing of the modes (L, m), 1 <= L <= N, |m| <= L.

    The flat position of (L, m) is ``L*L + L + m - 1``, so modes are L-major
    with m ascending from -L to L.
    """

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("truncation N must be >= 1")

    @classmethod
    def from_size(cls, size: int) -> "ModeIndex":
        N = int(round(math.sqrt(size + 1))) - 1
        if N < 1 or N * N + 2 * N != size:
            raise ValueError(f"{size} is not N^2 + 2N for any N >= 1")
        return cls(N)

    @property
    def size(self) -> int:
        return self.N * self.N + 2 * self.N

    def flat(self, L, m):
        L = np.asarray(L)
        m = np.asarray(m)
        if np.any(L < 1) or np.any(L > self.N) or np.any(np.abs(m) > L):
            raise IndexError(f"mode outside V_{self.N}")
        return L * L + L + m - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.concatenate([np.full(2 * L + 1, L) for L in range(1, self.N + 1)])

    @property
    def orders(self) -> np.ndarray:
        return np.concatenate([np.arange(-L, L + 1) for L in range(1, self.N + 1)])

    @property
    def eigenvalues(self) -> np.ndarray:
        L = self.degrees
        return (L * (L + 1)).astype(float)

    def pairs(self):
        for L in range(1, self.N + 1):
            for m in range(-L, L + 1):
                yield L, m

    def conjugate_partner(self) -> np.ndarray:
        """Flat index of (L, -m) for every mode."""
        return self.flat(self.degrees, -self.orders)


def normalized_legendre(L: int, m: int, x):
    """Colatitude factor of Y_{L,m}: Y_{L,m}(theta, phi) = this(cos theta) e^{i m phi}."""
    if abs(m) > L:
        return np.zeros_like(np.asarray(x, dtype=float))
    k = abs(m)
    log_ratio = math.lgamma(L - k + 1) - math.lgamma(L + k + 1)
    value = math.sqrt((2 * L + 1) / (4 * math.pi)) * math.exp(0.5 * log_ratio) * assoc_legendre(L, k, x)
    if m < 0 and k % 2:
        value = -value
    return value


def scalar_harmonic(L: int, m: int, theta, phi):
    """Orthonormal Y_{L,m}(theta, phi); L = 0 is allowed."""
    return normalized_legendre(L, m, np.cos(theta)) * np.exp(1j * m * np.asarray(phi))


def _grad_factor(L: int, m: int, mu: int, x):
    c_L = (L + 1) * math.sqrt(L / (2 * L + 1))
    d_L = L * math.sqrt((L + 1) / (2 * L + 1))
    k = m - mu
    out = d_L * clebsch_gordan(L, m, L + 1, k, 1, mu) * normalized_legendre(L + 1, k, x)
    if L >= 1 and abs(k) <= L - 1:
        out = out + c_L * clebsch_gordan(L, m, L - 1, k, 1, mu) * normalized_legendre(L - 1, k, x)
    return out


def _curl_factor(L: int, m: int, mu: int, x):
    k = m - mu
    return math.sqrt(eigenvalue(L)) * clebsch_gordan(L, m, L, k, 1, mu) * normalized_legendre(L, k, x)


def grad_y_covariant(L: int, m: int, theta, phi) -> np.ndarray:
    """Covariant components of the surface gradient of Y_{L,m}; shape (..., 3)."""
    x = np.cos(theta)
    phi = np.asarray(phi)
    return np.stack([_grad_factor(L, m, mu, x) * np.exp(1j * (m - mu) * phi) for mu in COMPONENTS], axis=-1)


def curl_y_covariant(L: int, m: int, theta, phi) -> np.ndarray:
    """Covariant components of x × Grad Y_{L,m}; shape (..., 3)."""
    x = np.cos(theta)
    phi = np.asarray(phi)
    return np.stack([1j * _curl_factor(L, m, mu, x) * np.exp(1j * (m - mu) * phi) for mu in COMPONENTS], axis=-1)


def z_basis(L: int, m: int, theta, phi) -> np.ndarray:
    """Covariant components of Z_{L,m} = -lambda_L^{-1/2} x × Grad Y_{L,m}."""
    return -curl_y_covariant(L, m, theta, phi) / math.sqrt(eigenvalue(L))


def covariant_to_cartesian(v) -> np.ndarray:
    """Map covariant components (..., 3) to Cartesian components (..., 3)."""
    return np.asarray(v) @ COVARIANT_BASIS


def cartesian_to_covariant(v) -> np.ndarray:
    """Inverse of :func:`covariant_to_cartesian`: v_mu = v . conj(e_mu)."""
    return np.asarray(v) @ COVARIANT_BASIS.conj().T


def unit_vector(theta, phi) -> np.ndarray:
    theta = np.asarray(theta)
    phi = np.asarray(phi)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) * np.ones_like(phi)], axis=-1)


@dataclass(frozen=True)
class BasisTables:
    """Colatitude factors of Y, Grad Y and Z on a set of nodes.

    Arrays are laid out ``[..., node, m + N, L - 1]`` and vanish where |m| > L.
    The azimuthal exponential is not included; for a vector component mu the
    implied factor is ``exp(i (m - mu) phi)``.

    scalar:   Y_{L,m}(theta) colatitude factor, shape (nodes, 2N+1, N)
    gradient: B_mu, shape (3, nodes, 2N+1, N)
    velocity: Z_mu / (-i), shape (3, nodes, 2N+1, N); i.e. Z_mu = -i * velocity
    """

    N: int
    scalar: np.ndarray
    gradient: np.ndarray
    velocity: np.ndarray


def basis_tables(N: int, cos_theta) -> BasisTables:
    """Precompute the B/D/Y factors at the given colatitude nodes."""
    x = np.asarray(cos_theta, dtype=float)
    nodes = x.size
    lmax = N + 1
    P = assoc_legendre_table(lmax, x)  # [L, m, node]
    ell = np.arange(lmax + 1)[:, None]
    k = np.arange(lmax + 1)[None, :]
    valid = k <= ell
    log_ratio = np.where(
        valid,
        np.array([[math.lgamma(a - b + 1) - math.lgamma(a + b + 1) if b <= a else 0.0
                   for b in range(lmax + 1)] for a in range(lmax + 1)]),
        0.0)
    norm = np.where(valid, np.sqrt((2 * ell + 1) / (4 * np.pi)) * np.exp(0.5 * log_ratio), 0.0)
    ybar_pos = norm[:, :, None] * P  # [L, k >= 0, node]

    # Signed-order lookup: ybar[L, k + lmax, node]
    ybar = np.zeros((lmax + 1, 2 * lmax + 1, nodes))
    ybar[:, lmax:, :] = ybar_pos
    sign = (-1.0) ** np.arange(1, lmax + 1)
    ybar[:, lmax - 1::-1, :] = ybar_pos[:, 1:, :] * sign[None, :, None]

    def ybar_at(L, kk):
        if L < 0 or abs(kk) > L:
            return np.zeros(nodes)
        return ybar[L, kk + lmax]

    scalar = np.zeros((nodes, 2 * N + 1, N))
    grad = np.zeros((3, nodes, 2 * N + 1, N))
    vel = np.zeros((3, nodes, 2 * N + 1, N))
    for L in range(1, N + 1):
        c_L = (L + 1) * math.sqrt(L / (2 * L + 1))
        d_L = L * math.sqrt((L + 1) / (2 * L + 1))
        for m in range(-L, L + 1):
            scalar[:, m + N, L - 1] = ybar_at(L, m)
            for i, mu in enumerate(COMPONENTS):
                kk = m - mu
                grad[i, :, m + N, L - 1] = (
                    c_L * clebsch_gordan_j1(L, m, L - 1, mu) * ybar_at(L - 1, kk)
                    + d_L * clebsch_gordan_j1(L, m, L + 1, mu) * ybar_at(L + 1, kk))
                # Z_mu = -lambda^{-1/2} * i sqrt(lambda) C Y = -i C Y
                vel[i, :, m + N, L - 1] = clebsch_gordan_j1(L, m, L, mu) * ybar_at(L, kk)
    return BasisTables(N, scalar, grad, vel)
