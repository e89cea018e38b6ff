"""Variable-order (1-5), variable-step NDF integrator for stiff spectral systems.

The NDF of order p with parameter kappa_p,

    sum_{j=1}^p (1/j) nabla^j y_{n+1} = h F(t_{n+1}, y_{n+1})
                                        + kappa_p gamma_p nabla^{p+1} y_{n+1},
    gamma_p = sum_{j=1}^p 1/j,

is solved in quasi-constant-step form.  The state keeps the backward
differences ``D[j] = nabla^j y_n`` on an equidistant mesh of spacing h; a step
size change re-interpolates the table onto the new spacing.  With
``d = y_{n+1} - y_pred = nabla^{p+1} y_{n+1}`` the corrector equation becomes

    (1 - kappa_p) gamma_p d + sum_{j=1}^p gamma_j D[j] = h F(t_{n+1}, y_pred + d),

solved by modified Newton with the diagonal iteration matrix
``1 - h / ((1 - kappa_p) gamma_p) * J`` where J is a user-supplied diagonal
(the exact Jacobian of the linear part for the Navier-Stokes system).

The local error estimate is ``(kappa_p gamma_p + 1/(p+1)) * d``; errors are
measured in the weighted RMS norm over real degrees of freedom with weight
``1 / (atol + rtol |y|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

MAX_ORDER = 5
NEWTON_MAXITER = 4
SAFETY = 0.8
MIN_FACTOR = 0.5
MAX_FACTOR = 2.0

KAPPA = np.array([0.0, -0.1850, -1.0 / 9.0, -0.0823, -0.0415, 0.0, 0.0])
GAMMA = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, MAX_ORDER + 2))])
ALPHA = (1.0 - KAPPA) * GAMMA
ERROR_CONST = KAPPA * GAMMA + 1.0 / np.arange(1, MAX_ORDER + 3)


class IntegrationError(RuntimeError):
    def __init__(self, message: str, stats: dict):
        super().__init__(f"{message} (stats: {stats})")
        self.stats = stats


@dataclass(frozen=True)
class NDFCoefficients:
    order: int
    kappa: float
    gamma: float
    alpha: float
    error_constant: float


def ndf_coefficients(p: int) -> NDFCoefficients:
    if not 1 <= p <= MAX_ORDER:
        raise ValueError(f"NDF order must be in 1..{MAX_ORDER}, got {p}")
    return NDFCoefficients(p, float(KAPPA[p]), float(GAMMA[p]), float(ALPHA[p]), float(ERROR_CONST[p]))


@dataclass(frozen=True)
class ToleranceSpec:
    rtol: float = 1e-6
    atol: float = 1e-10

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")


def rms_norm(x: np.ndarray) -> float:
    """RMS over real degrees of freedom (real and imaginary parts counted separately)."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return math.sqrt(float(np.sum(x.real ** 2 + x.imag ** 2)) / (2 * x.size))
    return math.sqrt(float(np.mean(x * x)))


def _rescale_matrix(order: int, ratio: float) -> np.ndarray:
    """Map nabla^j on spacing h to nabla^j on spacing ratio*h, j = 0..order.

    The Newton backward interpolant sum_j binom(s+j-1, j) D[j] is sampled at
    s = -k*ratio, k = 0..order, and differenced again.
    """
    n = order + 1
    W = np.ones((n, n))
    for k in range(n):
        s = -k * ratio
        for j in range(1, n):
            W[k, j] = W[k, j - 1] * (s + j - 1) / j
    Delta = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1):
            Delta[j, k] = (-1) ** k * math.comb(j, k)
    return Delta @ W


def rescale_differences(D: np.ndarray, order: int, ratio: float) -> None:
    if ratio == 1.0:
        return
    R = _rescale_matrix(order, ratio)
    D[:order + 1] = R @ D[:order + 1]


def select_order_and_step(h: float, order: int, errors: Sequence[float]) -> tuple[int, float]:
    """Choose the next order among p-1, p, p+1 and the matching step size.

    ``errors`` holds the weighted error estimates at orders p-1, p, p+1 (use
    ``inf`` for an unavailable order).  Each candidate k proposes
    ``h (SAFETY / err_k)^(1/(k+1))``; the largest proposal wins, ties going to
    the higher order, and the growth factor is clamped to [1/2, 2].
    """
    best_order, best_factor = order, -1.0
    for k, err in zip((order - 1, order, order + 1), errors):
        if not 1 <= k <= MAX_ORDER or not np.isfinite(err):
            continue
        factor = math.inf if err == 0 else (SAFETY / err) ** (1.0 / (k + 1))
        if factor >= best_factor:
            best_order, best_factor = k, factor
    if best_factor < 0:
        return order, h
    return best_order, h * min(MAX_FACTOR, max(MIN_FACTOR, best_factor))


@dataclass
class StepperState:
    """Mutable NDF state: difference table, order, step and counters."""

    t: float
    h: float
    order: int
    D: np.ndarray
    jac_diag: np.ndarray | float = 0.0
    f: np.ndarray | None = None
    fixed: bool = False
    n_equal_steps: int = 0
    stats: dict = field(default_factory=lambda: dict(
        accepted=0, rejected=0, newton_iterations=0, newton_failures=0, rhs_evaluations=0))
    _iteration_cache: tuple | None = field(default=None, repr=False)

    @property
    def y(self) -> np.ndarray:
        return self.D[0]

    @classmethod
    def start(cls, t0: float, y0, h: float, jac_diag=0.0, f0=None) -> "StepperState":
        y0 = np.asarray(y0)
        dtype = np.result_type(y0.dtype, np.asarray(jac_diag).dtype, float)
        D = np.zeros((MAX_ORDER + 3,) + y0.shape, dtype=dtype)
        D[0] = y0
        if f0 is not None:
            D[1] = h * np.asarray(f0)
        return cls(t0, h, 1, D, jac_diag, None if f0 is None else np.asarray(f0, dtype=dtype))

    @classmethod
    def from_history(cls, t: float, history: Sequence, h: float, order: int,
                     jac_diag=0.0) -> "StepperState":
        """Fixed-step state from equidistant values [y_n, y_{n-1}, ..., y_{n-order}]."""
        if len(history) != order + 1:
            raise ValueError("need order + 1 history values")
        vals = np.array(history)
        dtype = np.result_type(vals.dtype, np.asarray(jac_diag).dtype, float)
        D = np.zeros((MAX_ORDER + 3,) + vals.shape[1:], dtype=dtype)
        for j in range(order + 1):
            D[j] = sum((-1) ** k * math.comb(j, k) * vals[k] for k in range(j + 1))
        return cls(t, h, order, D, jac_diag, fixed=True, n_equal_steps=order + 1)

    def iteration_denominator(self) -> np.ndarray:
        key = (self.order, self.h)
        if self._iteration_cache is None or self._iteration_cache[0] != key:
            c = self.h / ALPHA[self.order]
            self._iteration_cache = (key, 1.0 - c * np.asarray(self.jac_diag))
        return self._iteration_cache[1]

    def change_step(self, h_new: float, order: int | None = None) -> None:
        if order is not None:
            self.order = order
        rescale_differences(self.D, self.order, h_new / self.h)
        self.h = h_new
        self.n_equal_steps = 0


def _newton(rhs, t_new, y_pred, c, psi, denom, scale, tol, stats):
    d = np.zeros_like(y_pred)
    y = y_pred.copy()
    dy_norm_old = None
    for k in range(NEWTON_MAXITER):
        f = rhs(t_new, y)
        stats["rhs_evaluations"] += 1
        stats["newton_iterations"] += 1
        if not np.all(np.isfinite(f)):
            break
        dy = (c * f - psi - d) / denom
        dy_norm = rms_norm(dy / scale)
        rate = None if dy_norm_old is None else dy_norm / dy_norm_old
        if rate is not None and (rate >= 1 or rate ** (NEWTON_MAXITER - k) / (1 - rate) * dy_norm > tol):
            break
        y += dy
        d += dy
        if dy_norm == 0 or (rate is not None and rate / (1 - rate) * dy_norm < tol):
            return True, y, d
        dy_norm_old = dy_norm
    return False, y, d


def take_step(state: StepperState, rhs: Callable, tol: ToleranceSpec) -> bool:
    """Attempt one step of size ``state.h``; update ``state`` and report acceptance."""
    p, h = state.order, state.h
    D = state.D
    t_new = state.t + h
    y_pred = D[:p + 1].sum(axis=0)
    scale = tol.atol + tol.rtol * np.abs(y_pred)
    psi = np.tensordot(GAMMA[1:p + 1], D[1:p + 1], axes=1) / ALPHA[p]
    c = h / ALPHA[p]
    newton_tol = max(10 * np.finfo(float).eps / tol.rtol, min(0.03, tol.rtol ** 0.5))

    converged, y_new, d = _newton(rhs, t_new, y_pred, c, psi, state.iteration_denominator(),
                                  scale, newton_tol, state.stats)
    if not converged:
        state.stats["newton_failures"] += 1
        if state.fixed:
            raise IntegrationError(f"Newton iteration failed at t={t_new}", dict(state.stats))
        state.stats["rejected"] += 1
        state.change_step(h * MIN_FACTOR)
        return False

    scale = tol.atol + tol.rtol * np.abs(y_new)
    err_norm = rms_norm(ERROR_CONST[p] * d / scale)
    if err_norm > 1 and not state.fixed:
        state.stats["rejected"] += 1
        factor = min(SAFETY, max(MIN_FACTOR, (SAFETY / err_norm) ** (1.0 / (p + 1))))
        state.change_step(h * factor)
        return False

    D[p + 2] = d - D[p + 1]
    D[p + 1] = d
    for i in reversed(range(p + 1)):
        D[i] += D[i + 1]
    state.t = t_new
    state.f = (d + psi) / c
    state.n_equal_steps += 1
    state.stats["accepted"] += 1

    if state.fixed or state.n_equal_steps < p + 1:
        return True
    err_lower = rms_norm(ERROR_CONST[p - 1] * D[p] / scale) if p > 1 else math.inf
    err_upper = rms_norm(ERROR_CONST[p + 1] * D[p + 2] / scale) if p < MAX_ORDER else math.inf
    new_order, h_new = select_order_and_step(h, p, (err_lower, err_norm, err_upper))
    state.change_step(h_new, new_order)
    return True


def hermite(t0, y0, f0, t1, y1, f1, t):
    """Cubic Hermite interpolant through (y, y') at both step ends."""
    dt = t1 - t0
    s = (t - t0) / dt
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * dt * f0 + h01 * y1 + h11 * dt * f1


@dataclass
class IntegrationResult:
    t: float
    y: np.ndarray
    stats: dict
    times: list
    steps: list
    orders: list
    outputs: list


def integrate(y0, t_span, rhs: Callable, tol: ToleranceSpec = ToleranceSpec(), jac_diag=0.0,
              output_times: Sequence[float] = (), observer: Callable | None = None,
              step_callback: Callable | None = None, h0: float | None = None,
              max_steps: int = 1_000_000) -> IntegrationResult:
    """Adaptive NDF integration of y' = rhs(t, y) over ``t_span``.

    ``observer(t, y)`` is called at every requested output time (dense output
    by cubic Hermite interpolation); ``step_callback(state)`` after every
    accepted step.
    """
    t0, t_end = map(float, t_span)
    horizon = t_end - t0
    if not horizon > 0:
        raise ValueError("t_end must exceed t_start")
    h_min = 1e-12 * horizon
    h = min(1e-3, horizon / 100) if h0 is None else h0
    y0 = np.asarray(y0)
    f0 = rhs(t0, y0)
    state = StepperState.start(t0, y0, h, jac_diag, f0)
    state.stats["rhs_evaluations"] += 1

    pending = sorted(float(t) for t in output_times if t0 <= t <= t_end)
    outputs = []

    def emit(t, y):
        outputs.append((t, y))
        if observer is not None:
            observer(t, y)

    while pending and pending[0] == t0:
        emit(t0, y0.copy())
        pending.pop(0)

    times, steps, orders = [t0], [], []
    t_prev, y_prev, f_prev = t0, y0.copy(), state.f.copy()
    while state.t < t_end:
        if state.stats["accepted"] >= max_steps:
            raise IntegrationError("maximum number of steps exceeded", dict(state.stats))
        if state.t + state.h > t_end:
            state.change_step(t_end - state.t)
        if state.h < h_min:
            raise IntegrationError(f"step size underflow at t={state.t}", dict(state.stats))
        h_used, p_used = state.h, state.order
        if not take_step(state, rhs, tol):
            continue
        if t_end - state.t < h_min:
            state.t = t_end
        y_new, f_new = state.y.copy(), state.f.copy()
        while pending and pending[0] <= state.t:
            tq = pending.pop(0)
            yq = y_new if tq == state.t else hermite(t_prev, y_prev, f_prev, state.t, y_new, f_new, tq)
            emit(tq, yq)
        times.append(state.t)
        steps.append(h_used)
        orders.append(p_used)
        if step_callback is not None:
            step_callback(state)
        t_prev, y_prev, f_prev = state.t, y_new, f_new
    return IntegrationResult(state.t, state.y.copy(), dict(state.stats), times, steps, orders, outputs)


def integrate_fixed(history: Sequence, t: float, h: float, order: int, n_steps: int,
                    rhs: Callable, jac_diag=0.0, tol: ToleranceSpec = ToleranceSpec(1e-10, 1e-14)):
    """Fixed-step, fixed-order NDF from an equidistant starting history."""
    state = StepperState.from_history(t, history, h, order, jac_diag)
    for _ in range(n_steps):
        take_step(state, rhs, tol)
    return state
