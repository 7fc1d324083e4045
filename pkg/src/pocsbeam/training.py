"""Unsupervised training of per-iteration schedules.

Gradients come from central finite differences over the whole mini-batch
loss: with at most 2T parameters this is cheap, exact to O(h^2), and avoids
differentiating through the power method.  Updates use a from-scratch Adam.
Channels are freshly sampled per mini-batch from per-sample derived seeds,
so the entire run is a pure function of the TrainConfig.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .algorithms import UnfoldedSchedule
from .batch import (
    channel_batch,
    prepare,
    run_pocs_batch,
    run_pocs_bp_batch,
)
from .linalg import SystemConfig, derive_seed
from .objectives import DEFAULT_SOFTMIN_BETA, softmin

# reserved top-level streams under a TrainConfig seed
TRAIN_STREAM = 1
HELDOUT_STREAM = 2

HELDOUT_POOL_SIZE = 50

DEFAULT_INIT_BETA = math.sqrt(0.9)


@dataclass(frozen=True)
class TrainConfig:
    """Everything that determines a training run, seed included."""

    problem: SystemConfig
    depth: int
    algorithm: str = "du_pocs_bp"  # du_pocs | du_pocs_bp
    power_bound: float | None = None  # required by du_pocs, absent for du_pocs_bp
    learning_rate: float = 0.003
    n_batches: int = 1000
    batch_size: int = 30
    fd_step: float = 1e-4
    softmin_beta: float = DEFAULT_SOFTMIN_BETA
    init_lambda: float = 1.0
    init_beta: float = DEFAULT_INIT_BETA
    seed: int = 0
    incremental: bool = True

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.learning_rate <= 0 or self.fd_step <= 0:
            raise ValueError("learning_rate and fd_step must be positive")
        if self.batch_size < 1 or self.n_batches < 0:
            raise ValueError("batch_size >= 1 and n_batches >= 0 required")
        if self.algorithm not in ("du_pocs", "du_pocs_bp"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "du_pocs" and self.power_bound is None:
            raise ValueError("du_pocs requires a power_bound")
        if self.algorithm == "du_pocs_bp" and self.power_bound is not None:
            raise ValueError("du_pocs_bp omits the power constraint; drop power_bound")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative 64-bit integer")


@dataclass
class AdamState:
    """First/second moment accumulators with the standard defaults."""

    m: np.ndarray
    v: np.ndarray
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, n_params: int):
        return cls(m=np.zeros(n_params), v=np.zeros(n_params))


@dataclass(frozen=True)
class TrainLogEntry:
    depth: int
    batch_index: int
    mean_loss: float
    wall_time_ms: float


def fd_grad(loss_fn, params, h: float) -> np.ndarray:
    """Central-difference gradient (f(p+h e_i) - f(p-h e_i)) / 2h."""
    if h <= 0:
        raise ValueError("fd step must be positive")
    p = np.asarray(params, dtype=float)
    grad = np.empty(p.size)
    for i in range(p.size):
        e = np.zeros(p.size)
        e[i] = h
        fp = loss_fn(p + e)
        fm = loss_fn(p - e)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise ValueError(f"non-finite loss at coordinate {i}: f+={fp}, f-={fm}")
        grad[i] = (fp - fm) / (2.0 * h)
    return grad


def adam_step(state: AdamState, params, grad, lr: float) -> tuple[AdamState, np.ndarray]:
    """One bias-corrected Adam update; returns the new state and parameters."""
    p = np.asarray(params, dtype=float)
    g = np.asarray(grad, dtype=float)
    if p.shape != g.shape or p.shape != state.m.shape:
        raise ValueError("parameter/gradient/state length mismatch")
    step = state.step + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * g
    v = state.beta2 * state.v + (1.0 - state.beta2) * g * g
    m_hat = m / (1.0 - state.beta1**step)
    v_hat = v / (1.0 - state.beta2**step)
    new_p = p - lr * m_hat / (np.sqrt(v_hat) + state.eps)
    new_state = AdamState(m=m, v=v, step=step, beta1=state.beta1, beta2=state.beta2, eps=state.eps)
    return new_state, new_p


def batch_seeds(cfg: TrainConfig, depth: int, batch_index: int) -> list[int]:
    """Per-sample seeds for one mini-batch, independent of evaluation order."""
    return [
        derive_seed(cfg.seed, TRAIN_STREAM, depth, batch_index, i)
        for i in range(cfg.batch_size)
    ]


def heldout_seeds(cfg: TrainConfig, pool_size: int = HELDOUT_POOL_SIZE) -> list[int]:
    """Fixed evaluation pool, disjoint from every training stream."""
    return [derive_seed(cfg.seed, HELDOUT_STREAM, j) for j in range(pool_size)]


def _check_finite(losses: np.ndarray, seeds, where: str):
    bad = np.flatnonzero(~np.isfinite(losses))
    if bad.size:
        raise ValueError(f"non-finite loss in {where}, sample seed {seeds[bad[0]]}")


def train_du_pocs(cfg: TrainConfig) -> tuple[UnfoldedSchedule, list[TrainLogEntry]]:
    """Train the relaxation schedule of the unfolded feasibility solver.

    Loss per mini-batch: mean final feasibility loss over freshly sampled
    channel realizations.  Only the lambdas train; betas stay zero.
    """
    if cfg.algorithm != "du_pocs":
        raise ValueError("config is not a du_pocs config")
    gamma = cfg.problem.snr_target
    lam = np.full(cfg.depth, cfg.init_lambda)
    state = AdamState.zeros(cfg.depth)
    log: list[TrainLogEntry] = []
    for b in range(cfg.n_batches):
        t0 = time.perf_counter()
        seeds = batch_seeds(cfg, 0, b)
        prep = prepare(channel_batch(cfg.problem, seeds))

        def mean_loss(p):
            _, losses, _ = run_pocs_batch(prep, gamma, cfg.power_bound, p)
            _check_finite(losses, seeds, f"batch {b}")
            return float(losses.mean())

        grad = fd_grad(mean_loss, lam, cfg.fd_step)
        current = mean_loss(lam)
        state, lam = adam_step(state, lam, grad, cfg.learning_rate)
        log.append(TrainLogEntry(cfg.depth, b, current, (time.perf_counter() - t0) * 1e3))
    return UnfoldedSchedule(lambdas=lam, betas=np.zeros(cfg.depth)), log


def train_du_pocs_bp(cfg: TrainConfig) -> tuple[UnfoldedSchedule, list[TrainLogEntry]]:
    """Train {lambda_t, beta_t} of the bounded-perturbation variant.

    Incremental mode grows the depth one iteration at a time; parameters
    trained at depth d seed depth d+1, the new slot starting from the global
    initial values.  Loss: mean of -softmin(per-user SNR of w_d) over the
    mini-batch, evaluated at the output of the current depth.
    """
    if cfg.algorithm != "du_pocs_bp":
        raise ValueError("config is not a du_pocs_bp config")
    gamma = cfg.problem.snr_target
    sigma = cfg.problem.noise_std
    lam = np.full(cfg.depth, cfg.init_lambda)
    bet = np.full(cfg.depth, cfg.init_beta)
    log: list[TrainLogEntry] = []
    depths = range(1, cfg.depth + 1) if cfg.incremental else [cfg.depth]
    for d in depths:
        state = AdamState.zeros(2 * d)
        for b in range(cfg.n_batches):
            t0 = time.perf_counter()
            seeds = batch_seeds(cfg, d, b)
            prep = prepare(channel_batch(cfg.problem, seeds))

            def mean_loss(p):
                w, _, _ = run_pocs_bp_batch(prep, gamma, sigma, p[:d], p[d:])
                gains = np.abs(np.einsum("bki,bi->bk", prep.h.conj(), w)) ** 2
                unrm2 = np.einsum("bi,bi->b", w, w.conj()).real
                snrs = gains / (sigma**2 * unrm2[:, None])
                losses = np.array([-softmin(s, cfg.softmin_beta) for s in snrs])
                _check_finite(losses, seeds, f"depth {d} batch {b}")
                return float(losses.mean())

            params = np.concatenate([lam[:d], bet[:d]])
            grad = fd_grad(mean_loss, params, cfg.fd_step)
            current = mean_loss(params)
            state, params = adam_step(state, params, grad, cfg.learning_rate)
            lam[:d] = params[:d]
            bet[:d] = params[d:]
            log.append(TrainLogEntry(d, b, current, (time.perf_counter() - t0) * 1e3))
    return UnfoldedSchedule(lambdas=lam, betas=bet), log


def train(cfg: TrainConfig) -> tuple[UnfoldedSchedule, list[TrainLogEntry]]:
    if cfg.algorithm == "du_pocs":
        return train_du_pocs(cfg)
    return train_du_pocs_bp(cfg)
