import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pocsbeam import (
    SystemConfig,
    derive_seed,
    eig_oracle,
    fro_norm,
    hermitize,
    inner,
    outer,
    sample_channels,
)
from conftest import random_hermitian


def test_inner_identity_trace():
    eye = np.eye(5, dtype=complex)
    assert inner(eye, eye) == pytest.approx(5.0)


def test_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        inner(np.eye(2, dtype=complex), np.eye(3, dtype=complex))


def test_inner_rank_one_identity(rng):
    # tr(h h^H g g^H) = |g^H h|^2
    h = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    g = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert inner(outer(h), outer(g)) == pytest.approx(abs(np.vdot(g, h)) ** 2, rel=1e-12)


def test_fro_norm_examples():
    assert fro_norm(np.eye(3, dtype=complex)) == pytest.approx(np.sqrt(3))
    assert fro_norm(np.diag([3.0, 4.0]).astype(complex)) == pytest.approx(5.0)


def test_fro_norm_rank_one(rng):
    h = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    assert fro_norm(outer(h)) == pytest.approx(np.linalg.norm(h) ** 2, rel=1e-12)


def test_outer_basis_vector():
    e1 = np.zeros(3, complex)
    e1[0] = 1.0
    q = outer(e1)
    expected = np.zeros((3, 3), complex)
    expected[0, 0] = 1.0
    np.testing.assert_allclose(q, expected)


def test_outer_explicit_two_dim():
    h = np.array([1.0, 1.0j]) / np.sqrt(2)
    q = outer(h)
    np.testing.assert_allclose(q, np.array([[0.5, -0.5j], [0.5j, 0.5]]), atol=1e-15)


def test_outer_is_hermitian_and_zero_rejected(rng):
    h = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    q = outer(h)
    np.testing.assert_allclose(q, q.conj().T)
    with pytest.raises(ValueError):
        outer(np.zeros(4, complex))


def test_outer_single_nonzero_eigenvalue(rng):
    for _ in range(20):
        h = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        w, _ = eig_oracle(outer(h))
        assert w[0] == pytest.approx(np.linalg.norm(h) ** 2, rel=1e-10)
        assert np.all(np.abs(w[1:]) < 1e-10 * w[0])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_inner_product_axioms(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    x = random_hermitian(rng, n)
    y = random_hermitian(rng, n)
    z = random_hermitian(rng, n)
    a, b = rng.standard_normal(2)
    # symmetry, real bilinearity, positive definiteness
    assert inner(x, y) == pytest.approx(inner(y, x), rel=1e-10, abs=1e-10)
    assert inner(a * x + b * y, z) == pytest.approx(
        a * inner(x, z) + b * inner(y, z), rel=1e-9, abs=1e-9
    )
    assert inner(x, x) >= 0.0
    assert fro_norm(np.zeros((n, n), complex)) == 0.0
    if fro_norm(x) == 0.0:
        assert np.allclose(x, 0)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_cauchy_schwarz(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    x = random_hermitian(rng, n)
    y = random_hermitian(rng, n)
    assert abs(inner(x, y)) <= fro_norm(x) * fro_norm(y) * (1 + 1e-10) + 1e-12


def test_hermitize_enforces_symmetry(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = hermitize(g)
    np.testing.assert_array_equal(h, h.conj().T)


def test_sample_channels_deterministic():
    cfg = SystemConfig(n_antennas=4, n_users=3)
    a = sample_channels(cfg, 123)
    b = sample_channels(cfg, 123)
    np.testing.assert_array_equal(a.channels, b.channels)


def test_sample_channels_seed_sensitivity():
    cfg = SystemConfig(n_antennas=4, n_users=3)
    a = sample_channels(cfg, 5)
    b = sample_channels(cfg, 6)
    assert not np.array_equal(a.channels, b.channels)


def test_sample_channels_unit_entry_variance():
    # E||h_k||^2 = N for CN(0,1) entries; Monte Carlo over the shipped sampler
    cfg = SystemConfig(n_antennas=4, n_users=20)
    total = 0.0
    count = 0
    for s in range(5000):
        ch = sample_channels(cfg, derive_seed(99, s))
        total += float(np.sum(np.abs(ch.channels) ** 2))
        count += cfg.n_users
    assert total / count == pytest.approx(4.0, abs=0.05)


def test_config_validation():
    with pytest.raises(ValueError):
        SystemConfig(n_antennas=0, n_users=3)
    with pytest.raises(ValueError):
        SystemConfig(n_antennas=2, n_users=1, noise_std=0.0)
    with pytest.raises(ValueError):
        SystemConfig(n_antennas=2, n_users=1, snr_target=-1.0)


def test_derive_seed_stable_and_distinct():
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)
    assert derive_seed(7, 1, 2) != derive_seed(7, 1, 3)
    assert derive_seed(7, 1) != derive_seed(8, 1)
