"""Gauss-rectangle quadrature grid and FFT-based spectral transforms.

Grid fields are complex arrays laid out ring-major: a scalar field has shape
``(rings, M)`` and a vector field ``(3, rings, M)`` holding covariant
components in the order of :data:`~sphere_nse.harmonic_basis.COMPONENTS`.
Rings run north to south (increasing colatitude).  Longitudes are
``phi_q = 2 pi q / M`` for ``q = 0..M-1``; this is the same point set as
``q = 1..M`` since ``phi_M = 2 pi`` coincides with ``phi_0``.

Spectral coefficient vectors are flat complex arrays in
:class:`~sphere_nse.harmonic_basis.ModeIndex` order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .harmonic_basis import COMPONENTS, BasisTables, ModeIndex, basis_tables
from .special_functions import gauss_legendre

SYNTHESIS_KINDS = ("velocity", "gradient", "vorticity", "stream")


def grid_size_for(N: int) -> int:
    """Smallest even M >= 3N + 2; exact for the quadratic nonlinear Galerkin integrals."""
    if N < 1:
        raise ValueError("truncation N must be >= 1")
    M = 3 * N + 2
    return M if M % 2 == 0 else M + 1


@dataclass(frozen=True)
class QuadratureGrid:
    M: int
    cos_theta: np.ndarray
    theta: np.ndarray
    weights: np.ndarray
    phi: np.ndarray

    @property
    def rings(self) -> int:
        return self.M // 2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.M // 2, self.M)

    @property
    def size(self) -> int:
        return self.M * self.M // 2

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(theta, phi) arrays of shape ``self.shape``."""
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def quad_scalar(self, psi) -> complex:
        """Q_M(psi) = (2 pi / M) sum_q sum_p w_p psi(theta_p, phi_q)."""
        psi = np.asarray(psi)
        if psi.shape != self.shape:
            raise ValueError(f"field shape {psi.shape} does not match grid {self.shape}")
        return (2 * np.pi / self.M) * np.sum(self.weights @ psi)

    def inner(self, v, w) -> complex:
        """Discrete L^2 product (v, w)_M of scalar or covariant vector fields."""
        v = np.asarray(v)
        w = np.asarray(w)
        if v.shape != w.shape:
            raise ValueError("field shapes differ")
        prod = v * np.conj(w)
        if prod.ndim == 3:
            prod = prod.sum(axis=0)
        return self.quad_scalar(prod)


def build_grid_m(M: int) -> QuadratureGrid:
    if M < 2 or M % 2:
        raise ValueError("M must be an even integer >= 2")
    rule = gauss_legendre(M // 2)
    x = rule.nodes[::-1].copy()
    w = rule.weights[::-1].copy()
    phi = 2 * np.pi * np.arange(M) / M
    return QuadratureGrid(M, x, np.arccos(x), w, phi)


def build_grid(N: int) -> QuadratureGrid:
    """Grid with M = 3N + 2, rounded up to even."""
    return build_grid_m(grid_size_for(N))


@dataclass
class SphereTransform:
    """Analysis and synthesis between V_N coefficients and a quadrature grid.

    Per ring, a dense contraction over L collapses the colatitude factors,
    then a length-M FFT handles the azimuth.  Azimuthal wavenumbers
    ``k = m - mu`` lie in ``[-N-1, N+1]`` and map to FFT bin ``k mod M``;
    ``M >= 3N + 2`` keeps them distinct.
    """

    N: int
    grid: QuadratureGrid = None
    modes: ModeIndex = field(init=False)

    def __post_init__(self):
        if self.grid is None:
            self.grid = build_grid(self.N)
        if self.grid.M < 2 * self.N + 3:
            raise ValueError(f"grid M={self.grid.M} too coarse for truncation N={self.N}")
        self.modes = ModeIndex(self.N)
        L = self.modes.degrees
        m = self.modes.orders
        self._pm = m + self.N
        self._pl = L - 1
        lam = np.zeros((2 * self.N + 1, self.N))
        lam[:] = (np.arange(1, self.N + 1) * np.arange(2, self.N + 2))[None, :]
        self._lam = lam
        M = self.grid.M
        mm = np.arange(-self.N, self.N + 1)
        self._bins = np.stack([(mm - mu) % M for mu in COMPONENTS])
        self._scalar_bins = mm % M

    @cached_property
    def tables(self) -> BasisTables:
        return basis_tables(self.N, self.grid.cos_theta)

    # -- coefficient layout -------------------------------------------------
    def to_padded(self, alpha) -> np.ndarray:
        alpha = np.asarray(alpha)
        if alpha.shape != (self.modes.size,):
            raise ValueError(f"expected {self.modes.size} coefficients for N={self.N}, got {alpha.shape}")
        out = np.zeros((2 * self.N + 1, self.N), dtype=complex)
        out[self._pm, self._pl] = alpha
        return out

    def from_padded(self, padded) -> np.ndarray:
        return padded[self._pm, self._pl]

    # -- synthesis ------------------------------------------------------------
    def _synth_vector(self, a: np.ndarray, table: np.ndarray, factor: complex) -> np.ndarray:
        rings, M = self.grid.shape
        ring_sums = np.einsum("uplk,lk->upl", table, a) * factor
        spec = np.zeros((3, rings, M), dtype=complex)
        for i in range(3):
            spec[i][:, self._bins[i]] = ring_sums[i]
        return M * np.fft.ifft(spec, axis=-1)

    def _synth_scalar(self, a: np.ndarray) -> np.ndarray:
        rings, M = self.grid.shape
        ring_sums = np.einsum("plk,lk->pl", self.tables.scalar, a)
        spec = np.zeros((rings, M), dtype=complex)
        spec[:, self._scalar_bins] = ring_sums
        return M * np.fft.ifft(spec, axis=-1)

    def synthesize(self, alpha, kind: str = "velocity") -> np.ndarray:
        """Evaluate a linear combination on the grid.

        kind:
          velocity   sum alpha Z_{L,m}                 (vector)
          gradient   sum alpha lambda^{-1/2} Grad Y     (vector; equals x × u)
          vorticity  sum alpha lambda^{1/2} Y           (scalar)
          stream     -sum alpha lambda^{-1/2} Y         (scalar)
        """
        a = self.to_padded(alpha)
        if kind == "velocity":
            return self._synth_vector(a, self.tables.velocity, -1j)
        if kind == "gradient":
            return self._synth_vector(a / np.sqrt(self._lam), self.tables.gradient, 1.0)
        if kind == "vorticity":
            return self._synth_scalar(a * np.sqrt(self._lam))
        if kind == "stream":
            return self._synth_scalar(-a / np.sqrt(self._lam))
        if kind == "scalar":
            return self._synth_scalar(a)
        raise ValueError(f"unknown synthesis kind {kind!r}; expected one of {SYNTHESIS_KINDS}")

    # -- analysis -------------------------------------------------------------
    def _check(self, v, vector: bool):
        v = np.asarray(v)
        expect = ((3,) if vector else ()) + self.grid.shape
        if v.shape != expect:
            raise ValueError(f"field shape {v.shape} does not match grid {expect}")
        return v

    def analyze(self, v) -> np.ndarray:
        """alpha_{L,m} = (v, Z_{L,m})_M for a covariant vector field v."""
        v = self._check(v, vector=True)
        M = self.grid.M
        vhat = np.fft.fft(v, axis=-1) * (2 * np.pi / M)
        sel = np.stack([vhat[i][:, self._bins[i]] for i in range(3)])
        sel *= self.grid.weights[None, :, None]
        # conj(Z_mu) = conj(-i) * table * exp(-i k phi)
        padded = 1j * np.einsum("uplk,upl->lk", self.tables.velocity, sel)
        return self.from_padded(padded)

    def analyze_scalar(self, psi) -> np.ndarray:
        """(psi, Y_{L,m})_M for 1 <= L <= N in ModeIndex order."""
        psi = self._check(psi, vector=False)
        M = self.grid.M
        phat = np.fft.fft(psi, axis=-1) * (2 * np.pi / M)
        sel = phat[:, self._scalar_bins] * self.grid.weights[:, None]
        padded = np.einsum("plk,pl->lk", self.tables.scalar, sel)
        return self.from_padded(padded)


@lru_cache(maxsize=16)
def get_transform(N: int, M: int | None = None) -> SphereTransform:
    """Cached transform for truncation N (grid M defaults to 3N + 2, even)."""
    grid = build_grid(N) if M is None else build_grid_m(M)
    return SphereTransform(N, grid)


def analyze(v, N: int) -> np.ndarray:
    return get_transform(N).analyze(v)


def synthesize(alpha, kind: str = "velocity", N: int | None = None) -> np.ndarray:
    if N is None:
        N = ModeIndex.from_size(np.asarray(alpha).size).N
    return get_transform(N).synthesize(alpha, kind)

