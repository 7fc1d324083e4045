"""Vectorized multi-realization runners.

Training evaluates the same unrolled maps on whole mini-batches thousands of
times, so the hot loops here carry a batch axis and amortize the per-user
outer products.  Each runner mirrors the single-instance engine in
algorithms.py step for step (tested to float accumulation noise); batch
elements never mix, so results are independent of batch composition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import PM_EPS, PM_MAX_ITERS, default_start, phase_normalize, power_method
from .linalg import SystemConfig, sample_channels

_ZERO_NORM = 1e-300


@dataclass(frozen=True)
class PreparedBatch:
    """Stacked channels with precomputed per-user outer products."""

    h: np.ndarray  # (B, K, N) complex
    q: np.ndarray  # (B, K, N, N) complex, q[b,k] = h h^H
    q_norm_sq: np.ndarray  # (B, K) = ||h||^4

    @property
    def shape(self):
        return self.h.shape


def channel_batch(config: SystemConfig, seeds) -> np.ndarray:
    """Stack sample_channels draws for the given per-realization seeds."""
    b = len(seeds)
    h = np.empty((b, config.n_users, config.n_antennas), dtype=complex)
    for i, s in enumerate(seeds):
        h[i] = sample_channels(config, s).channels
    return h


def prepare(h: np.ndarray) -> PreparedBatch:
    q = np.einsum("bki,bkj->bkij", h, h.conj())
    hn2 = np.einsum("bki,bki->bk", h, h.conj()).real
    return PreparedBatch(h=h, q=q, q_norm_sq=hn2**2)


def qos_sweep_batch(x: np.ndarray, prep: PreparedBatch, gamma: float, lam: float) -> np.ndarray:
    """Relaxed QoS projections in user order, batched over realizations."""
    k_users = prep.h.shape[1]
    for k in range(k_users):
        qk = prep.q[:, k]
        val = np.einsum("bij,bij->b", x, qk.conj()).real
        coef = lam * np.maximum(0.0, gamma - val) / prep.q_norm_sq[:, k]
        x = x + coef[:, None, None] * qk
    return x


def power_step_batch(x: np.ndarray, power_bound: float, lam: float) -> np.ndarray:
    n = x.shape[-1]
    tr = np.einsum("bii->b", x).real
    excess = lam * np.maximum(0.0, tr - power_bound) / n
    x = x.copy()
    idx = np.arange(n)
    x[:, idx, idx] -= excess[:, None]
    return x


def batch_feasibility_loss(x: np.ndarray, prep: PreparedBatch, gamma: float, power_bound: float | None) -> np.ndarray:
    vals = np.einsum("bij,bkij->bk", x, prep.q.conj()).real
    loss = np.maximum(0.0, gamma - vals).sum(axis=1)
    if power_bound is not None:
        tr = np.einsum("bii->b", x).real
        loss += np.maximum(0.0, tr - power_bound)
    return loss


def run_pocs_batch(
    prep: PreparedBatch,
    gamma: float,
    power_bound: float | None,
    lambdas,
    track_losses: bool = False,
    stop_when_all_feasible: bool = False,
):
    """Unfolded POCS over a batch; returns (X_final, losses, first_feasible).

    losses is (T, B) when track_losses else just the final (B,) loss.
    first_feasible[b] is the first sweep with exactly zero loss, T+1 if none.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    b, _, n = prep.shape
    x = np.zeros((b, n, n), dtype=complex)
    depth = lambdas.size
    first = np.full(b, depth + 1, dtype=int)
    history = np.empty((depth, b)) if track_losses else None
    ran = 0
    for t, lam in enumerate(lambdas, start=1):
        x = qos_sweep_batch(x, prep, gamma, lam)
        if power_bound is not None:
            x = power_step_batch(x, power_bound, lam)
        loss = batch_feasibility_loss(x, prep, gamma, power_bound)
        np.minimum(first, np.where(loss == 0.0, t, depth + 1), out=first)
        if track_losses:
            history[t - 1] = loss
        ran = t
        if stop_when_all_feasible and (first <= depth).all():
            break
    final_losses = history[:ran] if track_losses else loss
    return x, final_losses, first


def power_method_batch(
    x: np.ndarray,
    start: np.ndarray | None = None,
    max_iters: int = PM_MAX_ITERS,
    eps: float = PM_EPS,
):
    """Batched power method mirroring eigen.power_method per sample.

    Each sample freezes at its own stopping iteration.  The rare stall of a
    nonzero matrix annihilating the start vector falls back to the
    single-instance routine so the restart branch stays identical.
    """
    b, n, _ = x.shape
    if start is None:
        u = np.tile(default_start(n), (b, 1))
    else:
        u = np.array(start, dtype=complex)
    lam = np.zeros(b)
    frozen = np.zeros(b, dtype=bool)

    # zero-matrix contract: freeze (0, start) samples whose first A u vanishes
    au = np.einsum("bij,bj->bi", x, u)
    nau = np.linalg.norm(au, axis=1)
    stalled = nau < _ZERO_NORM
    for i in np.flatnonzero(stalled):
        pair = power_method(x[i], max_iters=max_iters, eps=eps, start=u[i])
        lam[i], u[i] = pair.value, pair.vector
    frozen |= stalled

    for _ in range(max_iters):
        if frozen.all():
            break
        au = np.einsum("bij,bj->bi", x, u)
        nau = np.linalg.norm(au, axis=1)
        live = ~frozen
        hit_zero = live & (nau < _ZERO_NORM)
        for i in np.flatnonzero(hit_zero):
            pair = power_method(x[i], max_iters=max_iters, eps=eps, start=u[i])
            lam[i], u[i] = pair.value, pair.vector
            frozen[i] = True
            live[i] = False
        if not live.any():
            continue
        safe = np.where(nau < _ZERO_NORM, 1.0, nau)
        u_new = au / safe[:, None]
        lam_new = np.einsum("bi,bij,bj->b", u_new.conj(), x, u_new).real
        diff = np.max(np.abs(u_new - u), axis=1)
        u[live] = u_new[live]
        lam[live] = lam_new[live]
        frozen |= live & (diff < eps)
    for i in range(b):
        u[i] = phase_normalize(u[i])
    return lam, u


def run_pocs_bp_batch(
    prep: PreparedBatch,
    gamma: float,
    sigma: float,
    lambdas,
    betas,
    subtract_dominant: bool = False,
    track: bool = False,
):
    """Batched bounded-perturbation runner; returns (W, min_snr, feas_loss).

    W is (B, N) final beamformers.  With track=True the SNR/loss arrays carry
    the full (T, B) history, otherwise just the final iteration's values.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    b, _, n = prep.shape
    x = np.zeros((b, n, n), dtype=complex)
    lam_e, u = power_method_batch(x)
    depth = lambdas.size
    snr_hist = np.empty((depth, b)) if track else None
    loss_hist = np.empty((depth, b)) if track else None
    snr = loss = None
    for t in range(depth):
        b2 = betas[t] ** 2
        uuh = np.einsum("bi,bj->bij", u, u.conj())
        if subtract_dominant:
            x = x - b2 * lam_e[:, None, None] * uuh
        else:
            x = x - b2 * (x - lam_e[:, None, None] * uuh)
        x = qos_sweep_batch(x, prep, gamma, lambdas[t])
        lam_e, u = power_method_batch(x, start=u)
        gains = np.abs(np.einsum("bki,bi->bk", prep.h.conj(), u)) ** 2
        unrm2 = np.einsum("bi,bi->b", u, u.conj()).real
        snr = gains.min(axis=1) / (sigma**2 * unrm2)
        loss = batch_feasibility_loss(x, prep, gamma, None)
        if track:
            snr_hist[t] = snr
            loss_hist[t] = loss
    if track:
        return u, snr_hist, loss_hist
    return u, snr, loss
