"""POCS iteration engines, with and without spectral perturbation.

run_pocs sweeps relaxed projections over the constraint family (optionally
stopping at the first exactly-feasible iterate).  run_pocs_bp interleaves the
same QoS sweeps with a bounded perturbation that shrinks all non-dominant
spectral components, steering iterates toward rank one so the final dominant
eigenvector is a good beamformer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigen import power_method
from .linalg import ChannelSet
from .objectives import feasibility_loss, min_snr, to_db
from .projections import FeasibilitySpec, project_power, project_qos, relax

# "converged" = min-SNR stays within this many dB of its final value
CONVERGENCE_TOL_DB = 0.01


@dataclass(frozen=True)
class UnfoldedSchedule:
    """Per-iteration parameters: relaxation lambda_t and perturbation root beta_t.

    beta_t enters the update as beta_t**2, keeping the perturbation
    coefficient nonnegative no matter what training does to beta_t.
    """

    lambdas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        bet = np.asarray(self.betas, dtype=float)
        if lam.ndim != 1 or bet.ndim != 1 or lam.size != bet.size or lam.size < 1:
            raise ValueError("lambdas and betas must be 1-d with equal length >= 1")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(bet))):
            raise ValueError("schedule parameters must be finite")
        lam = lam.copy()
        bet = bet.copy()
        lam.setflags(write=False)
        bet.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "betas", bet)

    def __len__(self) -> int:
        return self.lambdas.size

    @classmethod
    def constant(cls, depth: int, lam: float, beta: float = 0.0):
        return cls(np.full(depth, float(lam)), np.full(depth, float(beta)))


@dataclass
class IterateTrace:
    """Per-iteration record behind the convergence plots."""

    iterations: list[int] = field(default_factory=list)
    feasibility_loss: list[float] = field(default_factory=list)
    min_snr: list[float] = field(default_factory=list)
    min_snr_db: list[float] = field(default_factory=list)
    snapshots: list[np.ndarray] | None = None

    def record(self, t: int, loss: float, snr: float = np.nan, x: np.ndarray | None = None):
        self.iterations.append(t)
        self.feasibility_loss.append(loss)
        self.min_snr.append(snr)
        self.min_snr_db.append(float(to_db(snr)) if snr > 0 else -np.inf)
        if self.snapshots is not None and x is not None:
            self.snapshots.append(x.copy())

    def __len__(self) -> int:
        return len(self.iterations)


def pocs_sweep(x: np.ndarray, spec: FeasibilitySpec, lam: float) -> np.ndarray:
    """One relaxed pass: QoS constraints in user order, then the power budget."""
    for c in spec.qos:
        x = relax(x, project_qos(x, c), lam)
    if spec.power is not None:
        x = relax(x, project_power(x, spec.power), lam)
    return x


def run_pocs(
    x0: np.ndarray,
    spec: FeasibilitySpec,
    lambdas,
    stop_on_feasible: bool = False,
    channels: ChannelSet | None = None,
    keep_snapshots: bool = False,
) -> tuple[np.ndarray, IterateTrace]:
    """Unfolded POCS with per-iteration relaxations lambdas[0..T-1].

    Records the feasibility loss after every sweep; when `channels` is given
    it also records the min-SNR of the dominant eigenvector of each iterate.
    With stop_on_feasible the run halts at the first exactly-zero loss.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size < 1:
        raise ValueError("need at least one iteration")
    trace = IterateTrace(snapshots=[] if keep_snapshots else None)
    x = np.asarray(x0, dtype=complex)
    pair = None
    for t, lam in enumerate(lambdas, start=1):
        x = pocs_sweep(x, spec, lam)
        loss = feasibility_loss(x, spec)
        snr = np.nan
        if channels is not None:
            pair = power_method(x, start=None if pair is None else pair.vector)
            snr = min_snr(pair.vector, channels)
        trace.record(t, loss, snr, x)
        if stop_on_feasible and loss == 0.0:
            break
    return x, trace


def run_pocs_bp(
    channels: ChannelSet,
    schedule: UnfoldedSchedule,
    x0: np.ndarray | None = None,
    subtract_dominant: bool = False,
    keep_snapshots: bool = False,
) -> tuple[np.ndarray, IterateTrace]:
    """Unfolded POCS with bounded perturbation toward rank-1 iterates.

    Per iteration t: take the dominant eigenpair of X_t, shrink the spectral
    residual by beta_t^2, then apply the K relaxed QoS projections with
    lambda_t (no power constraint).  Returns the unit dominant eigenvector of
    the final iterate plus the per-iteration min-SNR trace.

    subtract_dominant flips to the alternate reading that removes
    beta_t^2 * lambda_max * u u^H itself instead of the residual; off by
    default because shrinking the residual is what pulls iterates toward a
    rank-1 matrix.
    """
    n = channels.config.n_antennas
    spec = FeasibilitySpec.from_channels(channels)
    trace = IterateTrace(snapshots=[] if keep_snapshots else None)
    x = np.zeros((n, n), dtype=complex) if x0 is None else np.asarray(x0, dtype=complex)
    pair = power_method(x)
    for t in range(len(schedule)):
        lam_t = schedule.lambdas[t]
        b2 = schedule.betas[t] ** 2
        uuh = np.outer(pair.vector, pair.vector.conj())
        if subtract_dominant:
            x = x - b2 * pair.value * uuh
        else:
            x = x - b2 * (x - pair.value * uuh)
        for c in spec.qos:
            x = relax(x, project_qos(x, c), lam_t)
        pair = power_method(x, start=pair.vector)
        trace.record(t + 1, feasibility_loss(x, spec), min_snr(pair.vector, channels), x)
    return pair.vector, trace


def extract_beamformer(x: np.ndarray, max_iters: int = 50, eps: float = 1e-8) -> np.ndarray:
    """Phase-normalized unit dominant eigenvector of a nonzero iterate."""
    if not np.any(x):
        raise ValueError("cannot extract a beamformer from the zero matrix")
    return power_method(x, max_iters=max_iters, eps=eps).vector


def iterations_to_feasibility(trace: IterateTrace, cap: int | None = None) -> int:
    """First iteration with exactly zero loss; cap+1 if never reached."""
    cap = len(trace) if cap is None else cap
    for t, loss in zip(trace.iterations, trace.feasibility_loss):
        if loss == 0.0 and t <= cap:
            return t
    return cap + 1


def iterations_to_convergence(min_snr_db, tol: float = CONVERGENCE_TOL_DB) -> int:
    """First iteration after which the min-SNR stays within tol dB of its final value."""
    vals = np.asarray(min_snr_db, dtype=float)
    if vals.size == 0:
        raise ValueError("empty trace")
    final = vals[-1]
    t = vals.size
    for i in range(vals.size - 1, -1, -1):
        if abs(vals[i] - final) <= tol:
            t = i + 1
        else:
            break
    return t
