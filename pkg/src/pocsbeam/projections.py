"""Exact projections onto the QoS and power half-spaces, plus relaxation.

Both constraint sets are affine half-spaces, so the metric projections have
closed forms costing O(N^2):

    C  = {X : <X, Q> >= gamma}      P(X) = X + (gamma - <X,Q>)/||Q||^2 * Q
    B  = {X : tr(X) <= P}           P(X) = X - (tr(X) - P)/N * I
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import ChannelSet, inner, outer


@dataclass(frozen=True)
class QoSHalfSpace:
    """Per-user constraint {X : <X, Q> >= gamma} with Q = h h^H."""

    q: np.ndarray
    gamma: float
    q_norm_sq: float = field(init=False)

    def __post_init__(self):
        n2 = inner(self.q, self.q)
        if n2 <= 0.0:
            raise ValueError("QoS half-space needs a nonzero Q")
        if not (self.gamma > 0 and np.isfinite(self.gamma)):
            raise ValueError("gamma must be a positive real")
        object.__setattr__(self, "q_norm_sq", n2)


@dataclass(frozen=True)
class PowerHalfSpace:
    """Trace budget {X : tr(X) <= power_bound} in dimension N."""

    power_bound: float
    dim: int

    def __post_init__(self):
        if not (self.power_bound > 0 and np.isfinite(self.power_bound)):
            raise ValueError("power_bound must be a positive real")
        if self.dim < 1:
            raise ValueError("dim must be positive")


@dataclass(frozen=True)
class FeasibilitySpec:
    """Constraint family: K QoS half-spaces and an optional power budget."""

    qos: tuple[QoSHalfSpace, ...]
    power: PowerHalfSpace | None = None

    def __post_init__(self):
        qos = tuple(self.qos)
        if not qos:
            raise ValueError("need at least one QoS constraint")
        object.__setattr__(self, "qos", qos)

    @classmethod
    def from_channels(cls, channels: ChannelSet, power_bound: float | None = None):
        gamma = channels.config.snr_target
        qos = tuple(QoSHalfSpace(q=outer(h), gamma=gamma) for h in channels.channels)
        power = None
        if power_bound is not None:
            power = PowerHalfSpace(power_bound=power_bound, dim=channels.config.n_antennas)
        return cls(qos=qos, power=power)


def project_qos(x: np.ndarray, c: QoSHalfSpace) -> np.ndarray:
    """Metric projection onto a QoS half-space (identity when feasible)."""
    val = inner(x, c.q)
    if val >= c.gamma:
        return x
    return x + ((c.gamma - val) / c.q_norm_sq) * c.q


def project_power(x: np.ndarray, b: PowerHalfSpace) -> np.ndarray:
    """Metric projection onto the trace half-space; exact on the diagonal."""
    tr = float(np.trace(x).real)
    if tr <= b.power_bound:
        return x
    x = x.copy()
    x[np.diag_indices_from(x)] -= (tr - b.power_bound) / b.dim
    return x


def relax(x: np.ndarray, px: np.ndarray, lam: float) -> np.ndarray:
    """Relaxed projection X + lam*(P(X) - X); lam in (0,2) keeps POCS convergent."""
    return x + lam * (px - x)
