import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphere_nse.grid_transform import (SphereTransform, analyze, build_grid, build_grid_m,
                                       get_transform, grid_size_for, synthesize)
from sphere_nse.harmonic_basis import ModeIndex, covariant_to_cartesian, scalar_harmonic, z_basis
from sphere_nse.validation import random_real_coeffs, sample_z


def delta(N, L, m):
    a = np.zeros(ModeIndex(N).size, dtype=complex)
    a[ModeIndex(N).flat(L, m)] = 1.0
    return a


def test_grid_sizes():
    assert build_grid(10).M == 32
    assert build_grid(3).M == 12
    g = build_grid(100)
    assert g.M == 302 and g.size == 45602 and g.shape == (151, 302)
    with pytest.raises(ValueError):
        build_grid_m(7)


@given(st.integers(1, 60))
def test_grid_invariants(N):
    M = grid_size_for(N)
    assert M % 2 == 0 and M >= 3 * N + 2 and M - (3 * N + 2) <= 1
    g = build_grid(N)
    assert np.all(g.weights > 0)
    assert np.all(np.diff(g.cos_theta) < 0)  # north to south
    assert g.quad_scalar(np.ones(g.shape)) == pytest.approx(4 * math.pi, abs=1e-12)


def test_quad_scalar_examples():
    g = build_grid(4)
    theta, phi = g.mesh()
    assert abs(g.quad_scalar(scalar_harmonic(1, 0, theta, phi))) <= 1e-13
    assert g.quad_scalar(np.abs(scalar_harmonic(2, 1, theta, phi)) ** 2) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        g.quad_scalar(np.ones((3, 3)))


def test_quadrature_exactness_boundary():
    # exact for L + L' <= M - 1 in latitude, not assumed exact at L + L' = M
    g = build_grid_m(12)
    theta, phi = g.mesh()
    Y = lambda L: scalar_harmonic(L, 0, theta, phi)
    assert abs(g.quad_scalar(Y(5) * Y(6))) <= 1e-13
    assert abs(g.quad_scalar(Y(6) * Y(6)) - 1) > 1e-6


def test_analysis_examples():
    N = 5
    t = get_transform(N)
    out = t.analyze(t.synthesize(delta(N, 3, 2)))
    expected = delta(N, 3, 2)
    assert np.max(np.abs(out - expected)) <= 1e-12
    np.testing.assert_array_equal(t.analyze(np.zeros((3, *t.grid.shape))), 0)
    with pytest.raises(ValueError):
        t.analyze(np.zeros(t.grid.shape))


def test_synthesis_single_modes():
    N = 4
    t = get_transform(N)
    theta, phi = t.grid.mesh()
    v = t.synthesize(delta(N, 1, 0), "velocity")
    assert np.max(np.abs(np.moveaxis(v, 0, -1) - z_basis(1, 0, theta, phi))) <= 1e-12
    for L, m in [(2, -1), (4, 3)]:
        lam = L * (L + 1)
        y = scalar_harmonic(L, m, theta, phi)
        np.testing.assert_allclose(t.synthesize(delta(N, L, m), "vorticity"), math.sqrt(lam) * y, atol=1e-12)
        np.testing.assert_allclose(t.synthesize(delta(N, L, m), "stream"), -y / math.sqrt(lam), atol=1e-12)
    with pytest.raises(ValueError):
        t.synthesize(delta(N, 1, 0), "divergence")


def test_round_trip_n16(rng):
    N = 16
    t = get_transform(N)
    alpha = rng.standard_normal(ModeIndex(N).size) + 1j * rng.standard_normal(ModeIndex(N).size)
    assert np.max(np.abs(t.analyze(t.synthesize(alpha)) - alpha)) <= 1e-12 * np.max(np.abs(alpha))


@given(st.integers(1, 32), st.integers(0, 2 ** 32 - 1))
def test_discrete_parseval(N, seed):
    rng = np.random.default_rng(seed)
    t = get_transform(N)
    alpha = rng.standard_normal(t.modes.size) + 1j * rng.standard_normal(t.modes.size)
    v = t.synthesize(alpha)
    energy = np.sum(np.abs(alpha) ** 2)
    assert abs(t.grid.inner(v, v).real - energy) <= 1e-11 * energy


def test_fft_matches_direct_sums(rng):
    N = 8
    t = get_transform(N)
    Z, w = sample_z(N, t.grid)
    for _ in range(10):
        alpha = rng.standard_normal(Z.shape[0]) + 1j * rng.standard_normal(Z.shape[0])
        direct = np.einsum("a,apk->kp", alpha, Z).reshape(3, *t.grid.shape)
        assert np.max(np.abs(t.synthesize(alpha) - direct)) <= 1e-12 * np.max(np.abs(direct))
        v = rng.standard_normal((3, *t.grid.shape)) + 1j * rng.standard_normal((3, *t.grid.shape))
        direct_a = np.einsum("kp,p,apk->a", v.reshape(3, -1), w, Z.conj())
        assert np.max(np.abs(t.analyze(v) - direct_a)) <= 1e-12 * np.max(np.abs(direct_a))


@given(st.integers(1, 20), st.integers(0, 2 ** 32 - 1))
def test_real_coefficients_give_real_fields(N, seed):
    alpha = random_real_coeffs(N, np.random.default_rng(seed))
    t = get_transform(N)
    cart = covariant_to_cartesian(np.moveaxis(t.synthesize(alpha), 0, -1))
    assert np.max(np.abs(cart.imag)) <= 1e-12 * np.max(np.abs(cart))
    for kind in ("vorticity", "stream"):
        s = t.synthesize(alpha, kind)
        assert np.max(np.abs(s.imag)) <= 1e-12 * np.max(np.abs(s))


def test_scalar_analysis_inverts_synthesis(rng):
    N = 9
    t = get_transform(N)
    a = rng.standard_normal(t.modes.size) + 1j * rng.standard_normal(t.modes.size)
    np.testing.assert_allclose(t.analyze_scalar(t.synthesize(a, "scalar")), a, atol=1e-12)


def test_eigenrelation_via_round_trip(rng):
    N = 8
    t = get_transform(N)
    lam = t.modes.eigenvalues
    for L, m in [(1, 0), (3, -2), (8, 5)]:
        d = delta(N, L, m)
        z = t.synthesize(d)
        az = t.synthesize(lam * t.analyze(z))
        assert t.grid.inner(az, z) == pytest.approx(L * (L + 1), abs=1e-10)


def test_module_helpers_and_coarse_grid():
    alpha = delta(3, 2, 1)
    np.testing.assert_allclose(analyze(synthesize(alpha), 3), alpha, atol=1e-13)
    with pytest.raises(ValueError):
        SphereTransform(8, build_grid_m(12))
