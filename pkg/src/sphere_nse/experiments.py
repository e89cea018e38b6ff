"""The two benchmark problems: a manufactured solution and a random initial state.

Example 1.  With g(t) = nu e^{-t} (sin 5t + cos 10t) the exact field is

    u = t g S + g W1 + (t - 1) g W2,
    S  = sum_{L <= N0} [Z_{L,0} + 2 Re sum_{m=1}^L Z_{L,m}],
    W1 = Z_{1,0} + 2 Re Z_{1,1},   W2 = Z_{2,0} + 2 Re(Z_{2,1} + Z_{2,2}),

and the forcing is the residual f = u_t + nu A u + C u + B(u, u), built
spectrally.  Since 2 Re Z_{L,m} = Z_{L,m} + (-1)^m Z_{L,-m}, each pattern has
coefficient 1 at m >= 0 and (-1)^m at m < 0.

Example 2.  Coefficients a_L e^{i phi_m} for L <= 20, m >= 0 (mirrored to
m < 0 by the reality condition), with a_L proportional to 2 / (L + (nu L)^2.5)
and unit-norm profile; the forcing has the single coefficient f_{3,0}(t).
Phases come from ``numpy.random.default_rng(seed)`` (PCG64), one phase per
order m shared across degrees, phi_0 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import resize
from .grid_transform import get_transform
from .harmonic_basis import ModeIndex
from .operators import PhysicsParams, coriolis_diagonal, nonlinear_galerkin


@dataclass(frozen=True)
class Example1Spec:
    N0: int = 16
    nu: float = 0.1
    omega: float = 1.0

    def __post_init__(self):
        if self.N0 < 2:
            raise ValueError("N0 must be at least 2")

    @property
    def params(self) -> PhysicsParams:
        return PhysicsParams(self.nu, self.omega)


def example1_g(t: float, nu: float) -> float:
    return nu * math.exp(-t) * (math.sin(5 * t) + math.cos(10 * t))


def example1_g_prime(t: float, nu: float) -> float:
    return nu * math.exp(-t) * (5 * math.cos(5 * t) - 10 * math.sin(10 * t)
                                - math.sin(5 * t) - math.cos(10 * t))


def _real_pattern(modes: ModeIndex, degrees) -> np.ndarray:
    """Coefficients of sum over the given (L, m >= 0) of [Z_{L,m} + (1 - delta_m0) conj-partner]."""
    out = np.zeros(modes.size, dtype=complex)
    for L, ms in degrees:
        if L > modes.N:
            continue
        for m in ms:
            out[modes.flat(L, m)] = 1.0
            if m > 0:
                out[modes.flat(L, -m)] = (-1.0) ** m
    return out


def example1_patterns(spec: Example1Spec, N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    modes = ModeIndex(N)
    S = _real_pattern(modes, [(L, range(L + 1)) for L in range(1, spec.N0 + 1)])
    W1 = _real_pattern(modes, [(1, (0, 1))])
    W2 = _real_pattern(modes, [(2, (0, 1, 2))])
    return S, W1, W2


def example1_exact(t: float, spec: Example1Spec, N: int | None = None) -> np.ndarray:
    """Coefficients of the exact solution at time t, truncation N (default N0)."""
    S, W1, W2 = example1_patterns(spec, spec.N0 if N is None else N)
    g = example1_g(t, spec.nu)
    return t * g * S + g * W1 + (t - 1) * g * W2


def example1_derivative(t: float, spec: Example1Spec, N: int | None = None) -> np.ndarray:
    S, W1, W2 = example1_patterns(spec, spec.N0 if N is None else N)
    g = example1_g(t, spec.nu)
    gp = example1_g_prime(t, spec.nu)
    return (g + t * gp) * S + gp * W1 + (g + (t - 1) * gp) * W2


def example1_forcing(t: float, spec: Example1Spec, N: int | None = None) -> np.ndarray:
    """Manufactured forcing f_hat = du/dt + nu A u + C u + B(u, u), projected onto V_N.

    B is evaluated at truncation max(N, N0), which is exact for the
    degree-N0 exact field.
    """
    N = spec.N0 if N is None else N
    Nb = max(N, spec.N0)
    transform = get_transform(Nb)
    modes = transform.modes
    u = example1_exact(t, spec, Nb)
    linear = (spec.nu * modes.eigenvalues + coriolis_diagonal(modes, spec.omega)) * u
    f = example1_derivative(t, spec, Nb) + linear + nonlinear_galerkin(u, transform)
    return resize(f, N)


class Example1Forcing:
    """Callable forcing t -> f_hat(t) at a fixed truncation."""

    def __init__(self, spec: Example1Spec, N: int):
        self.spec = spec
        self.N = N

    def __call__(self, t: float) -> np.ndarray:
        return example1_forcing(t, self.spec, self.N)


@dataclass(frozen=True)
class Example2Spec:
    seed: int = 0
    nu: float = 1e-4
    omega: float = 1.0
    L_max: int = 20

    @property
    def params(self) -> PhysicsParams:
        return PhysicsParams(self.nu, self.omega)


def example2_amplitudes(spec: Example2Spec) -> np.ndarray:
    """a_L = b_L / ||b||, b_L = 2 / (L + (nu L)^2.5), L = 1..L_max."""
    L = np.arange(1, spec.L_max + 1, dtype=float)
    b = 2.0 / (L + (spec.nu * L) ** 2.5)
    return b / np.linalg.norm(b)


def example2_phases(spec: Example2Spec) -> np.ndarray:
    """phi_m for m = 0..L_max with phi_0 = 0 and phi_m uniform in (0, 2 pi)."""
    rng = np.random.default_rng(spec.seed)
    return np.concatenate([[0.0], rng.uniform(0.0, 2 * np.pi, size=spec.L_max)])


def example2_initial(spec: Example2Spec, N: int) -> np.ndarray:
    modes = ModeIndex(N)
    a = example2_amplitudes(spec)
    phi = example2_phases(spec)
    out = np.zeros(modes.size, dtype=complex)
    for L in range(1, min(N, spec.L_max) + 1):
        for m in range(L + 1):
            out[modes.flat(L, m)] = a[L - 1] * np.exp(1j * phi[m])
            if m > 0:
                out[modes.flat(L, -m)] = a[L - 1] * (-1.0) ** m * np.exp(-1j * phi[m])
    return out


def example2_forcing_value(t: float) -> float:
    """f_{3,0}(t): 1 up to t = 10, then cos(pi t / 5) exp(-(t - 10) / 5)."""
    if t <= 10:
        return 1.0
    return math.cos(math.pi * t / 5) * math.exp(-(t - 10) / 5)


def example2_forcing(t: float, N: int) -> np.ndarray:
    modes = ModeIndex(N)
    out = np.zeros(modes.size, dtype=complex)
    if N >= 3:
        out[modes.flat(3, 0)] = example2_forcing_value(t)
    return out


class Example2Forcing:
    def __init__(self, N: int):
        self.N = N
        self._template = example2_forcing(0.0, N)
        self._index = ModeIndex(N).flat(3, 0) if N >= 3 else None

    def __call__(self, t: float) -> np.ndarray:
        out = np.zeros_like(self._template)
        if self._index is not None:
            out[self._index] = example2_forcing_value(t)
        return out
