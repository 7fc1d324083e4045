"""Unsupervised losses and evaluation metrics.

feasibility_loss is the hinge-sum distance surrogate driving the unfolded
feasibility solver; mmf_loss is the negative softmin of per-user SNRs that
trains the beamforming variant without labeled optima.
"""

from __future__ import annotations

import numpy as np

from .linalg import ChannelSet, inner
from .projections import FeasibilitySpec

# softmin sharpness tuned as a hyperparameter; beta=0 averages, beta->inf mins
DEFAULT_SOFTMIN_BETA = 3.0


def feasibility_loss(x: np.ndarray, spec: FeasibilitySpec) -> float:
    """Sum of constraint gaps max(0, gamma - <X,Q_k>) + max(0, tr X - P).

    Zero exactly when X lies in the intersection; comparisons are exact,
    with no epsilon slack.
    """
    loss = 0.0
    for c in spec.qos:
        loss += max(0.0, c.gamma - inner(x, c.q))
    if spec.power is not None:
        loss += max(0.0, float(np.trace(x).real) - spec.power.power_bound)
    return loss


def softmin(values, beta: float) -> float:
    """Exponentially weighted softmin, sum s_k e^{-beta s_k} / sum e^{-beta s_k}.

    Max-shifted exponentials for overflow safety; beta=0 reduces exactly to
    the arithmetic mean, beta->inf approaches min.
    """
    s = np.asarray(values, dtype=float)
    if s.size == 0:
        raise ValueError("softmin of an empty collection")
    z = -beta * s
    z -= z.max()
    w = np.exp(z)
    return float((s * w).sum() / w.sum())


def snr_per_user(w: np.ndarray, channels: ChannelSet) -> np.ndarray:
    """Linear SNR |w^H h_k|^2 / (sigma^2 ||w||^2) for each user."""
    w = np.asarray(w, dtype=complex)
    nrm2 = float(np.real(np.vdot(w, w)))
    if nrm2 == 0.0:
        raise ValueError("zero beamformer")
    sigma = channels.config.noise_std
    gains = np.abs(channels.channels.conj() @ w) ** 2
    return gains / (sigma**2 * nrm2)


def min_snr(w: np.ndarray, channels: ChannelSet) -> float:
    """Worst-user SNR, the max-min-fair objective; scale/phase invariant in w."""
    return float(snr_per_user(w, channels).min())


def mmf_loss(w: np.ndarray, channels: ChannelSet, beta: float = DEFAULT_SOFTMIN_BETA) -> float:
    """Negative softmin of the per-user SNRs (minimize to push min SNR up)."""
    return -softmin(snr_per_user(w, channels), beta)


def to_db(x) -> np.ndarray | float:
    """10 log10 of a linear SNR value (the convention used in all reports)."""
    return 10.0 * np.log10(x)
