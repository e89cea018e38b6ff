import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphere_nse.diagnostics import energy_spectrum, l2_norm, reality_defect
from sphere_nse.experiments import (Example1Forcing, Example1Spec, Example2Forcing, Example2Spec,
                                    example1_derivative, example1_exact, example1_forcing,
                                    example1_g, example1_g_prime, example1_patterns,
                                    example2_amplitudes, example2_forcing, example2_forcing_value,
                                    example2_initial, example2_phases)
from sphere_nse.harmonic_basis import ModeIndex
from sphere_nse.operators import NavierStokesRHS


def test_example1_spec_validation():
    with pytest.raises(ValueError):
        Example1Spec(N0=1)


def test_g_derivative_matches_finite_difference():
    for t in (0.0, 0.3, 1.7):
        h = 1e-6
        fd = (example1_g(t + h, 0.2) - example1_g(t - h, 0.2)) / (2 * h)
        assert example1_g_prime(t, 0.2) == pytest.approx(fd, rel=1e-8, abs=1e-10)


def test_example1_initial_state():
    spec = Example1Spec(N0=5, nu=0.3)
    _, W1, W2 = example1_patterns(spec, 5)
    np.testing.assert_allclose(example1_exact(0.0, spec), 0.3 * (W1 - W2))
    S, W1, _ = example1_patterns(spec, 5)
    np.testing.assert_allclose(example1_exact(1.0, spec), example1_g(1.0, 0.3) * (S + W1))


def test_example1_z10_coefficient():
    spec = Example1Spec(N0=4, nu=0.1)
    k = ModeIndex(4).flat(1, 0)
    for t in (0.2, 0.9):
        g = example1_g(t, 0.1)
        assert example1_exact(t, spec)[k] == pytest.approx(t * g + g)


def test_example1_patterns_are_real():
    S, W1, W2 = example1_patterns(Example1Spec(N0=6), 6)
    for pat in (S, W1, W2):
        assert reality_defect(pat) == 0
    assert np.count_nonzero(W1) == 3 and np.count_nonzero(W2) == 5
    assert np.count_nonzero(S) == ModeIndex(6).size


def test_example1_truncated_pattern():
    S, _, _ = example1_patterns(Example1Spec(N0=4), 8)
    assert np.all(energy_spectrum(S)[4:] == 0)


def test_manufactured_residual():
    spec = Example1Spec(N0=5, nu=0.1, omega=1.0)
    F = NavierStokesRHS(5, spec.params, Example1Forcing(spec, 5))
    for t in (0.0, 0.4, 1.3):
        np.testing.assert_allclose(F(t, example1_exact(t, spec)), example1_derivative(t, spec), atol=1e-10)


def test_forcing_with_analytic_vs_fd_derivative():
    spec = Example1Spec(N0=4, nu=0.1, omega=1.0)
    t, h = 0.7, 1e-6
    fd = (example1_exact(t + h, spec) - example1_exact(t - h, spec)) / (2 * h)
    F = NavierStokesRHS(4, spec.params)
    other = fd - F(t, example1_exact(t, spec))
    np.testing.assert_allclose(example1_forcing(t, spec), other, atol=1e-7)


def test_forcing_linear_part_scales_with_nu():
    from sphere_nse.operators import nonlinear_galerkin
    t = 0.6

    def linear_part(nu):
        spec = Example1Spec(N0=3, nu=nu, omega=1.0)
        u = example1_exact(t, spec)
        f = example1_forcing(t, spec)
        return f - nonlinear_galerkin(u) - nu * ModeIndex(3).eigenvalues * u

    np.testing.assert_allclose(linear_part(0.2), 2 * linear_part(0.1), atol=1e-14)


def test_example2_amplitudes_and_phases():
    spec = Example2Spec(seed=7)
    a = example2_amplitudes(spec)
    assert np.sum(a ** 2) == pytest.approx(1.0, abs=1e-15)
    phi = example2_phases(spec)
    assert phi[0] == 0 and np.all((phi[1:] > 0) & (phi[1:] < 2 * math.pi))
    np.testing.assert_array_equal(phi, example2_phases(Example2Spec(seed=7)))
    assert not np.array_equal(phi, example2_phases(Example2Spec(seed=8)))


def test_example2_phases_frozen():
    # numpy default_rng (PCG64), seed 0
    phi = example2_phases(Example2Spec(seed=0))
    np.testing.assert_allclose(phi[1:4], 2 * math.pi * np.random.default_rng(0).uniform(size=3), rtol=0)


@given(st.integers(0, 1000))
def test_example2_initial_structure(seed):
    spec = Example2Spec(seed=seed)
    alpha = example2_initial(spec, 25)
    a = example2_amplitudes(spec)
    E = energy_spectrum(alpha)
    L = np.arange(1, 21)
    np.testing.assert_allclose(E[:20], (2 * L + 1) * a ** 2, rtol=1e-14)
    assert np.all(E[20:] == 0)
    assert E.sum() == pytest.approx(np.sum((2 * L + 1) * a ** 2), rel=1e-14)
    assert l2_norm(alpha) ** 2 == pytest.approx(E.sum(), rel=1e-14)
    assert reality_defect(alpha) <= 1e-15


def test_example2_forcing_values():
    assert example2_forcing_value(5.0) == 1.0
    assert example2_forcing_value(10.0) == 1.0
    assert math.cos(2 * math.pi) * math.exp(0) == pytest.approx(example2_forcing_value(10.0 + 1e-12))
    assert abs(example2_forcing_value(12.5)) <= 1e-15
    f = example2_forcing(5.0, 6)
    assert np.count_nonzero(f) == 1 and f[ModeIndex(6).flat(3, 0)] == 1.0
    np.testing.assert_array_equal(Example2Forcing(6)(11.0), example2_forcing(11.0, 6))
    assert np.count_nonzero(example2_forcing(1.0, 2)) == 0
