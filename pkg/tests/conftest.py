import numpy as np
import pytest

from pocsbeam import SystemConfig, sample_channels


def random_hermitian(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (g + g.conj().T)


def random_channels(rng_or_seed, n=4, k=3, gamma=1.0, sigma=1.0):
    seed = int(rng_or_seed) if np.isscalar(rng_or_seed) else int(rng_or_seed.integers(2**31))
    cfg = SystemConfig(n_antennas=n, n_users=k, noise_std=sigma, snr_target=gamma)
    return sample_channels(cfg, seed)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
