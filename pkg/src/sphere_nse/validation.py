"""Self-checks of the solver against exact identities and brute-force oracles.

Each check returns a :class:`CheckResult`; ``run_checks`` drives a selection
of them.  The oracles here evaluate basis functions pointwise
(``scalar_harmonic``, ``z_basis``, ``grad_y_covariant``) and never touch the
transform tables or FFTs, so they are independent of the fast path.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .diagnostics import (energy_spectrum, field_error, inertial_manifold, l2_norm,
                          reality_defect)
from .experiments import (Example1Forcing, Example1Spec, Example2Forcing, Example2Spec,
                          example1_exact, example2_forcing_value, example2_initial)
from .grid_transform import build_grid, build_grid_m, get_transform
from .harmonic_basis import (ModeIndex, curl_y_covariant, grad_y_covariant, scalar_harmonic,
                             z_basis)
from .operators import NavierStokesRHS, PhysicsParams, nonlinear_galerkin
from .time_integrator import KAPPA, ToleranceSpec, integrate, integrate_fixed


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    limit: float
    passed: bool
    seconds: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.value:.3e} (limit {self.limit:.1e}, {self.seconds:.2f} s)"
        return f"{text} {self.detail}" if self.detail else text


def random_real_coeffs(N: int, rng: np.random.Generator, decay: float = 0.0) -> np.ndarray:
    """Random coefficients satisfying alpha_{L,-m} = (-1)^m conj(alpha_{L,m}).

    Degree L is damped by L^{-decay}.
    """
    modes = ModeIndex(N)
    L, m = modes.degrees, modes.orders
    raw = rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size)
    raw = raw * L.astype(float) ** (-decay)
    sign = np.where(m % 2, -1.0, 1.0)
    out = np.where(m > 0, raw, 0)
    out = out + np.where(m < 0, sign * np.conj(raw[modes.conjugate_partner()]), 0)
    out = out + np.where(m == 0, raw.real, 0)
    return out.astype(complex)


# pointwise basis samples on a grid, shape [mode, point] or [mode, point, 3]

def _points(grid):
    theta, phi = grid.mesh()
    return theta.ravel(), phi.ravel(), np.repeat(grid.weights, grid.M) * (2 * np.pi / grid.M)


def sample_scalar(Lmax: int, grid, L0: int = 0):
    th, ph, w = _points(grid)
    rows = [scalar_harmonic(L, m, th, ph) for L in range(L0, Lmax + 1) for m in range(-L, L + 1)]
    return np.array(rows), w


def sample_z(N: int, grid):
    th, ph, w = _points(grid)
    return np.array([z_basis(L, m, th, ph) for L, m in ModeIndex(N).pairs()]), w


def sample_grad(N: int, grid):
    th, ph, w = _points(grid)
    return np.array([grad_y_covariant(L, m, th, ph) for L, m in ModeIndex(N).pairs()]), w


def _timed(fn: Callable) -> Callable:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        name, value, limit, passed, detail = fn(*args, **kwargs)
        return CheckResult(name, float(value), float(limit), bool(passed),
                           time.perf_counter() - start, detail)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_quadrature(N: int = 8, Lmax: int = 12):
    """Discrete orthonormality of Y_{L,m}, L <= Lmax, on the degree-N grid."""
    grid = build_grid(N)
    Y, w = sample_scalar(Lmax, grid)
    gram = (Y * w) @ Y.conj().T
    dev = np.max(np.abs(gram - np.eye(len(Y))))
    return "quadrature exactness", dev, 1e-11, dev <= 1e-11, f"(M={grid.M})"


@_timed
def check_basis(N: int = 8):
    """(Z, Z')_M = identity and (Grad Y, Z)_M = 0 for degrees <= N."""
    grid = build_grid(N)
    Z, w = sample_z(N, grid)
    G, _ = sample_grad(N, grid)
    Zw = Z * w[None, :, None]
    gram = np.einsum("apk,bpk->ab", Zw, Z.conj())
    cross = np.einsum("apk,bpk->ab", G * w[None, :, None], Z.conj())
    dev = max(np.max(np.abs(gram - np.eye(len(Z)))), np.max(np.abs(cross)))
    return "basis orthonormality and divergence-freedom", dev, 1e-11, dev <= 1e-11, ""


@_timed
def check_fft_direct(N: int = 8, trials: int = 50, seed: int = 1):
    """Fast synthesis and analysis against brute-force double sums."""
    rng = np.random.default_rng(seed)
    transform = get_transform(N)
    grid = transform.grid
    Z, w = sample_z(N, grid)
    worst = 0.0
    for _ in range(trials):
        alpha = rng.standard_normal(Z.shape[0]) + 1j * rng.standard_normal(Z.shape[0])
        direct = np.einsum("a,apk->kp", alpha, Z).reshape(3, *grid.shape)
        fast = transform.synthesize(alpha, "velocity")
        worst = max(worst, np.max(np.abs(fast - direct)) / np.max(np.abs(direct)))
        v = rng.standard_normal((3, *grid.shape)) + 1j * rng.standard_normal((3, *grid.shape))
        vp = v.reshape(3, -1)
        direct_a = np.einsum("kp,p,apk->a", vp, w, Z.conj())
        fast_a = transform.analyze(v)
        worst = max(worst, np.max(np.abs(fast_a - direct_a)) / np.max(np.abs(direct_a)))
    return "FFT/direct equivalence", worst, 1e-12, worst <= 1e-12, f"({trials} inputs)"


@_timed
def check_nonlinear_identities(N: int = 12, trials: int = 20, seed: int = 2):
    """Re<alpha, B> = 0 and Re<lambda alpha, B> = 0 relative to ||alpha||^3."""
    rng = np.random.default_rng(seed)
    transform = get_transform(N)
    lam = transform.modes.eigenvalues
    worst_e = worst_z = 0.0
    for _ in range(trials):
        alpha = random_real_coeffs(N, rng)
        b = nonlinear_galerkin(alpha, transform)
        n3 = l2_norm(alpha) ** 3
        worst_e = max(worst_e, abs(np.vdot(alpha, b).real) / n3)
        worst_z = max(worst_z, abs(np.vdot(lam * alpha, b).real) / n3)
    ratio = max(worst_e / 1e-11, worst_z / 1e-10)
    return ("nonlinear energy/enstrophy identities", ratio, 1.0, ratio <= 1.0,
            f"(energy {worst_e:.1e}, enstrophy {worst_z:.1e})")


def galerkin_tensor(N: int, M: int | None = None) -> np.ndarray:
    """b(Z_R, Z_J, Z_L) assembled by quadrature of triple products.

    b = -sqrt(lambda_R / (lambda_J lambda_L)) (Y_R Grad Y_J, x_hat x Grad Y_L),
    the vorticity form of the advection term.  It differs from
    ((Z_R . grad) Z_J, Z_L) by a part antisymmetric in (R, J), so contractions
    with alpha_R alpha_J agree.
    """
    grid = build_grid_m(M or 4 * N + 4)
    th, ph, w = _points(grid)
    pairs = list(ModeIndex(N).pairs())
    Y = np.array([scalar_harmonic(L, m, th, ph) for L, m in pairs])
    G = np.array([grad_y_covariant(L, m, th, ph) for L, m in pairs])
    C = np.array([curl_y_covariant(L, m, th, ph) for L, m in pairs])
    lam = ModeIndex(N).eigenvalues
    T = np.einsum("rp,jpk,lpk,p->rjl", Y, G, C.conj(), w)
    return -T * np.sqrt(lam)[:, None, None] / np.sqrt(lam)[None, :, None] / np.sqrt(lam)[None, None, :]


@_timed
def check_nonlinear_oracle(N: int = 6, trials: int = 5, seed: int = 3):
    """Pseudospectral B against the directly assembled Galerkin tensor."""
    rng = np.random.default_rng(seed)
    T = galerkin_tensor(N)
    transform = get_transform(N)
    worst = 0.0
    for _ in range(trials):
        alpha = random_real_coeffs(N, rng)
        alpha /= l2_norm(alpha)
        direct = np.einsum("rjl,r,j->l", T, alpha, alpha)
        worst = max(worst, np.max(np.abs(nonlinear_galerkin(alpha, transform) - direct)))
    return "nonlinear oracle", worst, 1e-11, worst <= 1e-11, f"(N={N}, unit-norm inputs)"


@_timed
def check_energy_law(N: int = 12, nu: float = 0.01, omega: float = 1.0, seed: int = 4):
    """2 Re<alpha, F> = -2 nu sum lambda |alpha|^2 for unforced flow."""
    rng = np.random.default_rng(seed)
    F = NavierStokesRHS(N, PhysicsParams(nu, omega))
    alpha = random_real_coeffs(N, rng)
    lhs = 2 * np.vdot(alpha, F(0.0, alpha)).real
    rhs = -2 * nu * np.sum(F.modes.eigenvalues * np.abs(alpha) ** 2)
    rel = abs(lhs - rhs) / abs(rhs)
    return "energy law", rel, 1e-10, rel <= 1e-10, ""


_ORDER_STEPS = {1: (80, 160, 320), 2: (80, 160, 320), 3: (80, 160, 320), 4: (40, 80, 160), 5: (40, 80, 160)}


def ndf_observed_order(p: int, T: float = 1.0) -> float:
    """Least-squares log-log slope of the terminal error of fixed-step NDFp on y' = -y."""
    hs, errs = [], []
    for n in _ORDER_STEPS[p]:
        h = T / n
        history = [np.array([math.exp(-(p - k) * h)]) for k in range(p + 1)]
        state = integrate_fixed(history, p * h, h, p, n - p, lambda t, y: -y, jac_diag=-1.0)
        hs.append(h)
        errs.append(abs(state.y[0] - math.exp(-state.t)))
    return float(np.polyfit(np.log(hs), np.log(errs), 1)[0])


@_timed
def check_ndf_order():
    """Observed convergence order p +/- 0.2 and the kappa table."""
    slopes = [ndf_observed_order(p) for p in range(1, 6)]
    kappa_ok = np.allclose(KAPPA[1:6], [-0.1850, -1 / 9, -0.0823, -0.0415, 0.0], rtol=0, atol=0)
    worst = max(abs(s - p) for p, s in zip(range(1, 6), slopes))
    detail = "(slopes " + ", ".join(f"{s:.2f}" for s in slopes) + ")"
    return "NDF order", worst, 0.2, worst <= 0.2 and kappa_ok, detail


def example1_run(N: int, spec: Example1Spec, t_end: float = 2.0, rtol: float = 1e-6,
                 atol: float = 1e-10, checkpoints: int = 10):
    """Integrate Example 1 at truncation N; return (times, errors, max ||u||, result)."""
    F = NavierStokesRHS(N, spec.params, Example1Forcing(spec, N))
    times = np.linspace(t_end / checkpoints, t_end, checkpoints)
    res = integrate(example1_exact(0.0, spec, N), (0.0, t_end), F, ToleranceSpec(rtol, atol),
                    jac_diag=F.linear, output_times=times)
    errors = [field_error(y, example1_exact(t, spec)) for t, y in res.outputs]
    u_max = max(l2_norm(example1_exact(t, spec)) for t in np.linspace(0.0, t_end, 201))
    return [t for t, _ in res.outputs], errors, u_max, res


@_timed
def check_example1_closed_loop(N: int = 16, rtol: float = 1e-6):
    spec = Example1Spec(N0=N)
    _, errors, u_max, _ = example1_run(N, spec, rtol=rtol)
    ratio = max(errors) / (rtol * u_max)
    return "Example 1 closed loop", ratio, 10.0, ratio <= 10.0, f"(max error {max(errors):.2e})"


@_timed
def check_spectral_convergence(truncations=(8, 10, 12, 14), N0: int = 16):
    """Terminal error decreases monotonically and by >= 10x across the truncations."""
    spec = Example1Spec(N0=N0)
    terminal = [example1_run(N, spec, checkpoints=1)[1][-1] for N in truncations]
    monotone = all(b < a for a, b in zip(terminal, terminal[1:]))
    ratio = terminal[0] / terminal[-1]
    detail = "(errors " + ", ".join(f"N={N}: {e:.3e}" for N, e in zip(truncations, terminal))
    detail += f"; monotone={monotone})"
    return "spectral convergence", ratio, 10.0, monotone and ratio >= 10.0, detail


def spectrum_is_decreasing(E, floor_rel: float = 64 * np.finfo(float).eps) -> bool:
    """Strict decrease, treating shells below floor_rel * sum(E) as zero.

    Shells whose exact value is zero come out at roundoff level; they cannot
    break monotonicity but are allowed to wobble among themselves.
    """
    E = np.asarray(E, dtype=float)
    floor = floor_rel * E.sum()
    for a, b in zip(E, E[1:]):
        if a <= floor and b <= floor:
            continue
        if not b < a:
            return False
    return True


@_timed
def check_example2_sanity(N: int = 24, N1: int = 18, t_end: float = 2.0, rtol: float = 1e-3,
                          atol: float = 1e-6, seed: int = 0, outputs: int = 10):
    spec = Example2Spec(seed=seed)
    F = NavierStokesRHS(N, spec.params, Example2Forcing(N))
    a0 = example2_initial(spec, N)
    times = np.linspace(0.0, t_end, outputs + 1)
    res = integrate(a0, (0.0, t_end), F, ToleranceSpec(rtol, atol), jac_diag=F.linear,
                    output_times=times)
    f_max = max(abs(example2_forcing_value(t)) for t in np.linspace(0.0, t_end, 201))
    n0 = l2_norm(a0)
    defect = max(reality_defect(y) for _, y in res.outputs)
    bounded = all(l2_norm(y) <= n0 + t * f_max for t, y in res.outputs)
    forcing2 = Example2Forcing(2 * N1)
    decreasing = []
    for t, y in res.outputs:
        E = energy_spectrum(inertial_manifold(y, N1, spec.params, forcing2, t))[N1:]
        decreasing.append(spectrum_is_decreasing(E[len(E) // 2:]))
    passed = defect <= 1e-10 and bounded and all(decreasing)
    detail = (f"(reality {defect:.1e}, norm bounded={bounded}, "
              f"top half-shell decreasing at {sum(decreasing)}/{len(decreasing)} outputs)")
    return "Example 2 sanity", defect, 1e-10, passed, detail


FAST_CHECKS = (check_quadrature, check_basis, check_fft_direct, check_nonlinear_identities,
               check_nonlinear_oracle, check_energy_law, check_ndf_order)
SLOW_CHECKS = (check_example1_closed_loop, check_spectral_convergence, check_example2_sanity)


def run_checks(checks=FAST_CHECKS, out=print) -> list[CheckResult]:
    results = []
    for check in checks:
        result = check()
        out(result.line())
        results.append(result)
    return results
