"""Galerkin operators of the rotating-sphere Navier-Stokes system in the Z basis.

With u = sum alpha_{L,m} Z_{L,m} the semi-discrete system reads

    d alpha / dt = f_hat - nu lambda alpha - C_hat alpha - B_hat(alpha),

where lambda_L = L(L+1), C_hat is diagonal with entries -2 Omega i m / lambda_L,
and B_hat is the Galerkin projection of the advection term.  For a
divergence-free field, ``grad_u u = Grad(|u|^2 / 2) + zeta x × u`` with zeta
the normal vorticity; the gradient drops out against Z, leaving

    B_hat_{L,m} = (zeta (x × u), Z_{L,m}),   zeta = sum alpha lambda^{1/2} Y,
                                             x × u = sum alpha lambda^{-1/2} Grad Y.

Both factors are synthesized on the grid, multiplied pointwise and analysed
back.  The integrand has degree at most 3N + 1, so M >= 3N + 2 makes the
quadrature exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid_transform import SphereTransform, get_transform
from .harmonic_basis import ModeIndex

Forcing = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class PhysicsParams:
    nu: float
    omega: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("viscosity nu must be positive")


def stokes_apply(alpha, modes: ModeIndex) -> np.ndarray:
    return modes.eigenvalues * np.asarray(alpha)


def coriolis_diagonal(modes: ModeIndex, omega: float) -> np.ndarray:
    return -2j * omega * modes.orders / modes.eigenvalues


def coriolis_galerkin(alpha, modes: ModeIndex, omega: float) -> np.ndarray:
    return coriolis_diagonal(modes, omega) * np.asarray(alpha)


def linear_diagonal(modes: ModeIndex, params: PhysicsParams) -> np.ndarray:
    """Diagonal of the linear part of the right-hand side, -(nu A + C)."""
    return -params.nu * modes.eigenvalues - coriolis_diagonal(modes, params.omega)


def nonlinear_galerkin(alpha, transform: SphereTransform | None = None) -> np.ndarray:
    """Pseudospectral B_hat(alpha) = (zeta (x × u), Z_{L,m})_M."""
    alpha = np.asarray(alpha)
    if transform is None:
        transform = get_transform(ModeIndex.from_size(alpha.size).N)
    if transform.grid.M < 3 * transform.N + 2:
        raise ValueError("grid too coarse for exact nonlinear quadrature (need M >= 3N + 2)")
    zeta = transform.synthesize(alpha, "vorticity")
    g = transform.synthesize(alpha, "gradient")
    return transform.analyze(zeta[None] * g)


def forcing_coeffs(sampler, t: float, transform: SphereTransform) -> np.ndarray:
    """Project a grid-sampled tangential field onto V_N.

    ``sampler(theta, phi, t)`` returns covariant components with shape
    ``(3, rings, M)`` (or ``(rings, M, 3)``).
    """
    theta, phi = transform.grid.mesh()
    v = np.asarray(sampler(theta, phi, t))
    if v.shape[-1] == 3 and v.shape[0] != 3:
        v = np.moveaxis(v, -1, 0)
    return transform.analyze(v)


def zero_forcing(modes: ModeIndex) -> Forcing:
    zeros = np.zeros(modes.size, dtype=complex)
    return lambda t: zeros


class NavierStokesRHS:
    """Right-hand side F(t, alpha) of the spectral ODE system.

    ``forcing`` maps time to spectral coefficients; None means no forcing.
    Calls are counted in ``evaluations``.
    """

    def __init__(self, N: int, params: PhysicsParams, forcing: Forcing | None = None,
                 transform: SphereTransform | None = None):
        self.transform = transform or get_transform(N)
        self.modes = self.transform.modes
        self.params = params
        self.forcing = forcing
        self.linear = linear_diagonal(self.modes, params)
        self.evaluations = 0

    def __call__(self, t: float, alpha) -> np.ndarray:
        self.evaluations += 1
        out = self.linear * alpha - nonlinear_galerkin(alpha, self.transform)
        if self.forcing is not None:
            out = out + self.forcing(t)
        return out


def rhs(t: float, alpha, params: PhysicsParams, forcing: Forcing | None = None) -> np.ndarray:
    """F = f_hat - nu A alpha - C_hat alpha - B_hat(alpha)."""
    N = ModeIndex.from_size(np.asarray(alpha).size).N
    return NavierStokesRHS(N, params, forcing)(t, alpha)
