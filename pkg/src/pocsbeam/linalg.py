"""Complex Hermitian matrix primitives and channel sampling.

Everything downstream works in the real Hilbert space of N x N complex
Hermitian matrices equipped with <X, Y> = Re tr(XY) and the induced
Frobenius norm.  Beamformers and channels are plain complex ndarrays of
shape (N,); Hermitian matrices are complex ndarrays of shape (N, N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def hermitize(a: np.ndarray) -> np.ndarray:
    """Symmetrize (A + A^H)/2 so float drift cannot break X = X^H."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: np.ndarray, tol: float = 1e-9) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and bool(
        np.all(np.abs(a - a.conj().T) <= tol * max(1.0, float(np.abs(a).max(initial=0.0))))
    )


def inner(x: np.ndarray, y: np.ndarray) -> float:
    """Re tr(XY), the real inner product on Hermitian matrices."""
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(np.einsum("ij,ji->", x, y).real)


def fro_norm(x: np.ndarray) -> float:
    """sqrt(<X, X>); coincides with the Frobenius norm for Hermitian X."""
    return float(np.sqrt(max(inner(x, x), 0.0)))


def outer(h: np.ndarray) -> np.ndarray:
    """Rank-1 Hermitian matrix h h^H."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 1:
        raise ValueError("expected a vector")
    if not np.any(h):
        raise ValueError("zero vector has no outer-product constraint")
    return np.outer(h, h.conj())


@dataclass(frozen=True)
class SystemConfig:
    """Static problem parameters: antennas N, users K, noise std, SNR target."""

    n_antennas: int
    n_users: int
    noise_std: float = 1.0
    snr_target: float = 1.0

    def __post_init__(self):
        if self.n_antennas < 1 or self.n_users < 1:
            raise ValueError("n_antennas and n_users must be positive")
        if not (self.noise_std > 0 and np.isfinite(self.noise_std)):
            raise ValueError("noise_std must be a positive real")
        if not (self.snr_target > 0 and np.isfinite(self.snr_target)):
            raise ValueError("snr_target must be a positive real")


@dataclass(frozen=True)
class ChannelSet:
    """K channel vectors of length N plus the owning SystemConfig."""

    config: SystemConfig
    channels: np.ndarray  # (K, N) complex

    def __post_init__(self):
        h = np.asarray(self.channels, dtype=complex)
        if h.shape != (self.config.n_users, self.config.n_antennas):
            raise ValueError(
                f"channels shape {h.shape} does not match (K, N) = "
                f"({self.config.n_users}, {self.config.n_antennas})"
            )
        if not np.all(np.isfinite(h.view(float))):
            raise ValueError("channels contain non-finite entries")
        if np.any(~h.any(axis=1)):
            raise ValueError("every channel must be nonzero")
        h = h.copy()
        h.setflags(write=False)
        object.__setattr__(self, "channels", h)


def sample_channels(config: SystemConfig, seed: int) -> ChannelSet:
    """Draw K i.i.d. CN(0, I_N) channel vectors, deterministic in `seed`.

    Entries are circularly symmetric complex Gaussian with unit variance:
    (re + 1j*im)/sqrt(2) with re, im standard normal, real block drawn first.
    """
    rng = np.random.default_rng(seed)
    shape = (config.n_users, config.n_antennas)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return ChannelSet(config=config, channels=(re + 1j * im) / np.sqrt(2.0))


def derive_seed(root: int, *path: int) -> int:
    """Deterministic 64-bit child seed for stream (root, *path).

    Used to give every training sample / held-out realization its own
    reproducible stream independent of evaluation order.
    """
    ss = np.random.SeedSequence((int(root),) + tuple(int(p) for p in path))
    return int(ss.generate_state(1, np.uint64)[0])
