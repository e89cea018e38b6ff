import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphere_nse.diagnostics import (energy_spectrum, field_error, inertial_manifold, l2_norm,
                                    reality_defect, resize, stream_function, truncate, truncation_of,
                                    v_norm, vorticity)
from sphere_nse.grid_transform import get_transform
from sphere_nse.harmonic_basis import ModeIndex, scalar_harmonic, z_basis
from sphere_nse.operators import PhysicsParams, coriolis_diagonal, nonlinear_galerkin
from sphere_nse.validation import random_real_coeffs, spectrum_is_decreasing

seeds = st.integers(0, 2 ** 32 - 1)


def delta(N, L, m, c=1.0):
    a = np.zeros(ModeIndex(N).size, dtype=complex)
    a[ModeIndex(N).flat(L, m)] = c
    return a


def test_spectrum_examples():
    E = energy_spectrum(delta(5, 1, 0, 2 - 1j))
    assert E[0] == pytest.approx(5.0)
    assert np.all(E[1:] == 0)
    np.testing.assert_array_equal(energy_spectrum(np.zeros(ModeIndex(4).size)), 0)


@given(st.integers(1, 20), seeds)
def test_spectrum_sums_to_norm(N, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(ModeIndex(N).size) + 1j * rng.standard_normal(ModeIndex(N).size)
    E = energy_spectrum(a)
    assert np.all(E >= 0)
    assert E.sum() == pytest.approx(l2_norm(a) ** 2, rel=1e-12)
    assert E.sum() == pytest.approx(field_error(a, np.zeros_like(a)) ** 2, rel=1e-12)


def test_stream_and_vorticity_examples():
    N = 3
    t = get_transform(N)
    theta, phi = t.grid.mesh()
    y10 = scalar_harmonic(1, 0, theta, phi)
    np.testing.assert_allclose(stream_function(delta(N, 1, 0), t), -y10 / math.sqrt(2), atol=1e-13)
    np.testing.assert_allclose(vorticity(delta(N, 1, 0), t), math.sqrt(2) * y10, atol=1e-13)


@given(st.integers(1, 12), seeds)
def test_laplacian_consistency(N, seed):
    a = random_real_coeffs(N, np.random.default_rng(seed))
    t = get_transform(N)
    zeta = t.analyze_scalar(vorticity(a, t))
    psi = t.analyze_scalar(stream_function(a, t))
    np.testing.assert_allclose(zeta, -t.modes.eigenvalues * psi, atol=1e-12 * np.max(np.abs(a)) * N * N)


def test_truncate_examples(rng):
    a = rng.standard_normal(ModeIndex(6).size).astype(complex)
    np.testing.assert_array_equal(truncate(a, 6), a)
    E = energy_spectrum(truncate(a, 1))
    assert E[0] > 0 and np.all(E[1:] == 0)
    for bad in (0, 7):
        with pytest.raises(ValueError):
            truncate(a, bad)


@given(st.integers(1, 12).flatmap(lambda N: st.tuples(st.just(N), st.integers(1, N))), seeds)
def test_truncate_is_projection(args, seed):
    N, N1 = args
    a = np.random.default_rng(seed).standard_normal(ModeIndex(N).size).astype(complex)
    once = truncate(a, N1)
    np.testing.assert_array_equal(truncate(once, N1), once)
    assert l2_norm(once) <= l2_norm(a)


def test_resize_round_trip(rng):
    a = rng.standard_normal(ModeIndex(4).size).astype(complex)
    assert truncation_of(resize(a, 7)) == 7
    np.testing.assert_array_equal(resize(resize(a, 7), 4), a)


def test_norms(rng):
    a = random_real_coeffs(5, rng)
    modes = ModeIndex(5)
    assert v_norm(a) == pytest.approx(math.sqrt(np.sum(modes.eigenvalues * np.abs(a) ** 2)))
    assert reality_defect(a) <= 1e-15
    assert reality_defect(delta(5, 2, 1)) == pytest.approx(1.0)


def test_inertial_manifold_examples():
    p = PhysicsParams(0.01, 1.0)
    zero = np.zeros(ModeIndex(2).size, dtype=complex)
    np.testing.assert_array_equal(inertial_manifold(zero, 2, p), 0)
    f = delta(4, 3, 0)
    out = inertial_manifold(zero, 2, p, forcing=f)
    assert out[ModeIndex(4).flat(3, 0)] == pytest.approx(1 / (0.01 * 12))
    assert np.count_nonzero(out) == 1
    zonal = inertial_manifold(delta(3, 1, 0), 3, p)
    assert np.max(np.abs(zonal)) <= 1e-12
    with pytest.raises(ValueError):
        inertial_manifold(zero, 2, p, extended=2)


@given(st.integers(2, 8), seeds)
def test_inertial_manifold_residual(N1, seed):
    rng = np.random.default_rng(seed)
    p = PhysicsParams(0.05, 1.0)
    a = random_real_coeffs(N1, rng)
    f = lambda t: random_real_coeffs(2 * N1, np.random.default_rng(seed + 1))
    phi = inertial_manifold(a, N1, p, f, 0.3)
    modes = ModeIndex(2 * N1)
    shell = modes.degrees > N1
    assert np.all(phi[~shell] == 0)
    residual = f(0.3) - nonlinear_galerkin(resize(a, 2 * N1))
    diag = p.nu * modes.eigenvalues + coriolis_diagonal(modes, p.omega)
    np.testing.assert_allclose((diag * phi)[shell], residual[shell], rtol=1e-13, atol=1e-13)
    assert reality_defect(phi) <= 1e-12 * max(1.0, np.max(np.abs(phi)))


def test_field_error_examples(rng):
    a = rng.standard_normal(ModeIndex(3).size).astype(complex)
    assert field_error(a, a) == 0
    assert field_error(delta(3, 1, 0), np.zeros(ModeIndex(3).size)) == pytest.approx(1.0)
    assert field_error(delta(2, 1, 0), delta(4, 1, 0)) == 0


def test_field_error_sampler_path(rng):
    N = 5
    a = random_real_coeffs(N, rng)
    ref = random_real_coeffs(N, rng)
    pairs = list(ModeIndex(N).pairs())

    def sampler(theta, phi):
        return np.moveaxis(sum(c * z_basis(L, m, theta, phi) for c, (L, m) in zip(ref, pairs)), -1, 0)

    assert field_error(a, sampler) == pytest.approx(field_error(a, ref), abs=1e-11)


def test_spectrum_decrease_with_roundoff_floor():
    assert spectrum_is_decreasing([3.0, 2.0, 1.0, 1e-30, 2e-30])
    assert not spectrum_is_decreasing([3.0, 2.0, 2.5])
    assert not spectrum_is_decreasing([3.0, 1e-30, 1.0])
