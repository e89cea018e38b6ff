"""Energy spectra, stream function, truncation, approximate inertial manifold, norms."""

from __future__ import annotations

import numpy as np

from .grid_transform import get_transform
from .harmonic_basis import ModeIndex
from .operators import PhysicsParams, coriolis_diagonal, nonlinear_galerkin


def truncation_of(alpha) -> int:
    return ModeIndex.from_size(np.asarray(alpha).size).N


def resize(alpha, N: int) -> np.ndarray:
    """Re-express coefficients at truncation N (drops or zero-pads high degrees).

    Modes are L-major, so V_N coefficients are a prefix of V_{N'} ones.
    """
    alpha = np.asarray(alpha)
    n_new = ModeIndex(N).size
    out = np.zeros(n_new, dtype=np.result_type(alpha.dtype, complex))
    k = min(n_new, alpha.size)
    out[:k] = alpha[:k]
    return out


def truncate(alpha, N1: int) -> np.ndarray:
    """Zero every coefficient with L > N1 (the projection onto V_{N1})."""
    alpha = np.asarray(alpha)
    N = truncation_of(alpha)
    if not 1 <= N1 <= N:
        raise ValueError(f"cutoff N1={N1} outside 1..{N}")
    out = alpha.copy()
    out[ModeIndex(N1).size:] = 0
    return out


def energy_spectrum(alpha) -> np.ndarray:
    """E(L) = sum_{|m| <= L} |alpha_{L,m}|^2 for L = 1..N (index L - 1)."""
    alpha = np.asarray(alpha)
    modes = ModeIndex.from_size(alpha.size)
    return np.bincount(modes.degrees - 1, weights=np.abs(alpha) ** 2, minlength=modes.N)


def l2_norm(alpha) -> float:
    return float(np.sqrt(np.sum(np.abs(alpha) ** 2)))


def v_norm(alpha) -> float:
    """||u||_V = (A u, u)^{1/2}."""
    modes = ModeIndex.from_size(np.asarray(alpha).size)
    return float(np.sqrt(np.sum(modes.eigenvalues * np.abs(alpha) ** 2)))


def reality_defect(alpha) -> float:
    """max |alpha_{L,-m} - (-1)^m conj(alpha_{L,m})|; zero for real velocity fields."""
    alpha = np.asarray(alpha)
    modes = ModeIndex.from_size(alpha.size)
    sign = np.where(modes.orders % 2, -1.0, 1.0)
    return float(np.max(np.abs(alpha[modes.conjugate_partner()] - sign * np.conj(alpha))))


def stream_function(alpha, transform=None) -> np.ndarray:
    """Psi_N = -sum lambda^{-1/2} alpha Y on the grid."""
    transform = transform or get_transform(truncation_of(alpha))
    return transform.synthesize(alpha, "stream")


def vorticity(alpha, transform=None) -> np.ndarray:
    """Delta Psi_N = sum lambda^{1/2} alpha Y, the normal vorticity."""
    transform = transform or get_transform(truncation_of(alpha))
    return transform.synthesize(alpha, "vorticity")


def _forcing_at(forcing, t, N):
    if forcing is None:
        return np.zeros(ModeIndex(N).size, dtype=complex)
    if callable(forcing):
        forcing = forcing(t)
    return resize(forcing, N)


def inertial_manifold(alpha, N1: int, params: PhysicsParams, forcing=None, t: float = 0.0,
                      extended: int | None = None) -> np.ndarray:
    """Slave high modes (nu A + C)^{-1} (Pi_{2 N1} - Pi_{N1}) [f - B(u_{N1}, u_{N1})].

    ``alpha`` is projected onto V_{N1} first.  The result is returned at
    truncation ``extended`` (default 2 N1) and vanishes for L <= N1.  The
    nonlinear term is evaluated on the grid of the extended truncation, so the
    quadrature stays exact there.  ``forcing`` may be None, a coefficient
    array or a callable of time.
    """
    N2 = 2 * N1 if extended is None else extended
    if N2 <= N1:
        raise ValueError("extended truncation must exceed N1")
    low = resize(truncate(resize(alpha, max(N1, truncation_of(alpha))), N1), N2)
    transform = get_transform(N2)
    if transform.grid.M < 3 * N2 + 2:
        raise ValueError("grid resolution insufficient for the extended truncation")
    residual = _forcing_at(forcing, t, N2) - nonlinear_galerkin(low, transform)
    modes = transform.modes
    diag = params.nu * modes.eigenvalues + coriolis_diagonal(modes, params.omega)
    out = residual / diag
    out[: ModeIndex(N1).size] = 0
    return out


def field_error(alpha, reference, transform=None) -> float:
    """L^2(TS) norm of u_N - reference.

    ``reference`` is either a coefficient array (Parseval, truncations are
    padded to match) or a sampler ``(theta, phi) -> covariant (3, rings, M)``
    evaluated on the quadrature grid.
    """
    alpha = np.asarray(alpha)
    if callable(reference):
        transform = transform or get_transform(truncation_of(alpha))
        theta, phi = transform.grid.mesh()
        diff = transform.synthesize(alpha, "velocity") - np.asarray(reference(theta, phi))
        return float(np.sqrt(abs(transform.grid.inner(diff, diff))))
    reference = np.asarray(reference)
    N = max(truncation_of(alpha), truncation_of(reference))
    return l2_norm(resize(alpha, N) - resize(reference, N))
