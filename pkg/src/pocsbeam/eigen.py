"""Dominant eigenpair via the power method, spectral residual, dense oracle.

power_method follows the classic normalized iteration with an infinity-norm
stopping test and deterministic start, so training losses built on top of it
are reproducible, finite-difference friendly functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import hermitize, is_hermitian

PM_MAX_ITERS = 50
PM_EPS = 1e-8
EIG_ORACLE_MAX_DIM = 64

_ZERO_NORM = 1e-300


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray  # unit Euclidean norm, phase normalized


def default_start(n: int) -> np.ndarray:
    """Deterministic power-method start: normalized all-ones vector."""
    return np.full(n, 1.0 / np.sqrt(n), dtype=complex)


def _alternate_start(n: int) -> np.ndarray:
    # fallback if the primary start lies in the nullspace of a nonzero matrix
    v = np.zeros(n, dtype=complex)
    v[0] = 1.0
    return v


def phase_normalize(u: np.ndarray) -> np.ndarray:
    """Rotate so the largest-modulus component is real nonnegative."""
    idx = int(np.argmax(np.abs(u)))
    if np.abs(u[idx]) == 0.0:
        return u
    return u * np.exp(-1j * np.angle(u[idx]))


def power_method(
    a: np.ndarray,
    max_iters: int = PM_MAX_ITERS,
    eps: float = PM_EPS,
    start: np.ndarray | None = None,
) -> EigenPair:
    """Largest-magnitude eigenpair of Hermitian `a` by normalized iteration.

    Stops when ||u - u'||_inf < eps or after max_iters; returns the Rayleigh
    quotient and the phase-normalized unit iterate.  The zero matrix returns
    (0, start), which makes the downstream spectral perturbation a no-op.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = a.shape[0]
    u = default_start(n) if start is None else np.asarray(start, dtype=complex)
    lam = 0.0
    restarted = False
    t = 0
    while t < max_iters:
        au = a @ u
        nau = float(np.linalg.norm(au))
        if nau < _ZERO_NORM:
            if t == 0 and not np.any(np.abs(a) > _ZERO_NORM):
                return EigenPair(0.0, phase_normalize(u))
            if not restarted:
                # start vector hit the nullspace of a nonzero matrix
                restarted = True
                u = _alternate_start(n)
                continue
            return EigenPair(0.0, phase_normalize(u))
        u_prev = u
        u = au / nau
        lam = float(np.real(np.vdot(u, a @ u)))
        t += 1
        if float(np.max(np.abs(u - u_prev))) < eps:
            break
    return EigenPair(lam, phase_normalize(u))


def residual_component(x: np.ndarray, pair: EigenPair) -> np.ndarray:
    """Everything but the dominant component: X - lambda_max * u u^H."""
    u = pair.vector
    return hermitize(x - pair.value * np.outer(u, u.conj()))


def eig_oracle(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full spectral decomposition, eigenvalues sorted descending.

    Dense LAPACK path; guarded to N <= 64 since it only serves as a test
    oracle and as the factorization behind the randomized baseline.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if a.shape[0] > EIG_ORACLE_MAX_DIM:
        raise ValueError(f"eig_oracle limited to N <= {EIG_ORACLE_MAX_DIM}")
    if not is_hermitian(a):
        raise ValueError("eig_oracle requires a Hermitian matrix")
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()
