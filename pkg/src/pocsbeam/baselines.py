"""Hand-tuned reference schedule, randomized rank-1 extraction, SNR bound.

The upper bound on the max-min SNR comes from the dual of the relaxed
power-minimization problem: for any probability vector z over users,
lambda_max(sum_k z_k Q_k) / sigma^2 upper-bounds every achievable min-SNR,
with equality at the minimizing z.  Minimizing over the simplex by entropic
mirror descent therefore yields a bound that is certified valid at every
iterate and tightens monotonically, without an SDP solver.  A near-optimal
PSD matrix for the randomized baseline is recovered by column generation
over rank-1 atoms (the LP prices generate the next atom).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .eigen import eig_oracle
from .linalg import ChannelSet
from .objectives import min_snr

RANDA_DEFAULT_SAMPLES = 5000

# eigenvalues below this fraction of the largest count as numerically zero
_RANK_TOL = 1e-12


def reference_schedule(depth: int):
    """Manually tuned schedule: lambda_t = 1.9, beta_t^2 = 0.9 e^{-t/500}."""
    from .algorithms import UnfoldedSchedule

    if depth < 1:
        raise ValueError("depth must be >= 1")
    t = np.arange(1, depth + 1, dtype=float)
    return UnfoldedSchedule(
        lambdas=np.full(depth, 1.9),
        betas=np.sqrt(0.9 * np.exp(-t / 500.0)),
    )


def rand_a(
    x: np.ndarray,
    channels: ChannelSet,
    n_samples: int = RANDA_DEFAULT_SAMPLES,
    seed: int = 0,
) -> np.ndarray:
    """Randomized rank-1 extraction: best of w = V Sigma^{1/2} e candidates.

    e is uniform on the complex unit sphere; candidates are scored by
    min-SNR and ties keep the lowest sample index.  Requires X PSD up to a
    -1e-8 eigenvalue tolerance.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    w, v = eig_oracle(x)
    if w[-1] < -1e-8:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {w[-1]:.3e}")
    w = np.maximum(w, 0.0)
    if w[0] <= 0.0:
        raise ValueError("cannot sample beamformers from the zero matrix")
    w[w < _RANK_TOL * w[0]] = 0.0  # drop eigenvalue dust so rank-1 inputs stay rank-1
    scale = np.sqrt(w)
    rng = np.random.default_rng(seed)
    n = x.shape[0]
    best = None
    best_snr = -np.inf
    for _ in range(n_samples):
        e = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        e /= np.linalg.norm(e)
        cand = v @ (scale * e)
        if not np.any(cand):
            continue
        snr = min_snr(cand, channels)
        if snr > best_snr:
            best_snr = snr
            best = cand
    return best


@dataclass(frozen=True)
class BoundEstimate:
    """Certified SNR ceiling plus the recovered near-optimal PSD matrix."""

    x_star: np.ndarray
    bound: float  # linear min-SNR upper bound, certified
    p_certified: float  # dual power (lower bound on the relaxed optimum)
    p_primal: float  # tr(x_star), feasible power achieved by the recovery
    sweeps: int

    @property
    def gap(self) -> float:
        """Relative primal-dual power gap; 0 means the bound is exact."""
        return self.p_primal / self.p_certified - 1.0


def _certified_power(mix: np.ndarray, q: np.ndarray, gamma: float) -> tuple[float, np.ndarray]:
    """Dual power gamma * sum(y) after rescaling y = mix / lambda_max(M(mix))."""
    m = np.einsum("k,kij->ij", mix, q)
    w, v = np.linalg.eigh(m)
    lam = float(w[-1])
    return gamma * float(mix.sum()) / lam, v[:, -1]


def sdp_bound_estimate(
    channels: ChannelSet,
    tol: float = 1e-4,
    iter_cap: int = 400,
) -> BoundEstimate:
    """Upper bound on the achievable min-SNR plus a feasible PSD witness.

    Mirror descent minimizes lambda_max(sum_k z_k Q_k) over the simplex;
    every iterate certifies bound = gamma / (sigma^2 * P_dual) by weak
    duality, so the returned value is a valid ceiling regardless of how far
    the descent ran.  `tol` stops the sweep loop once the relative bound
    improvement over a 25-sweep window falls below it; `iter_cap` caps the
    sweeps outright.  Column generation then builds x_star = sum c_j d_j d_j^H
    (PSD, QoS-feasible to machine precision after an exact rescale).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if iter_cap < 1:
        raise ValueError("iter_cap must be >= 1")
    h = channels.channels
    k_users, n = h.shape
    gamma = channels.config.snr_target
    sigma = channels.config.noise_std
    q = np.einsum("ki,kj->kij", h, h.conj())

    z = np.ones(k_users) / k_users
    best_p, _ = _certified_power(z, q, gamma)
    best_z = z.copy()
    window_anchor = best_p
    sweeps = 0
    for t in range(iter_cap):
        m = np.einsum("k,kij->ij", z, q)
        w, v = np.linalg.eigh(m)
        u = v[:, -1]
        g = np.abs(h.conj() @ u) ** 2  # supergradient of lambda_max wrt z
        eta = 0.5 / (1.0 + 0.05 * t)
        z = z * np.exp(-eta * g / max(float(g.max()), 1e-300))
        z = z / z.sum()
        p_cand, _ = _certified_power(z, q, gamma)
        if p_cand > best_p:
            best_p = p_cand
            best_z = z.copy()
        sweeps = t + 1
        if (t + 1) % 25 == 0:
            if best_p - window_anchor < tol * max(best_p, 1e-300):
                break
            window_anchor = best_p

    # column generation for the primal witness: start from the eigenbasis of
    # the best dual matrix, let the LP prices propose new rank-1 atoms
    m_best = np.einsum("k,kij->ij", best_z, q)
    _, v = eig_oracle(m_best)
    atoms = [v[:, j] for j in range(n)]
    res = None
    for _ in range(40):
        a = np.stack(atoms, axis=1)
        gains = np.abs(h.conj() @ a) ** 2  # (K, m)
        res = linprog(
            np.ones(a.shape[1]),
            A_ub=-gains,
            b_ub=-gamma * np.ones(k_users),
            bounds=[(0, None)] * a.shape[1],
            method="highs",
        )
        if not res.success:
            raise RuntimeError(f"atom LP failed: {res.message}")
        prices = np.maximum(-res.ineqlin.marginals, 0.0)
        if prices.sum() > 0:
            m_p = np.einsum("k,kij->ij", prices, q)
            w_p, v_p = np.linalg.eigh(m_p)
            if float(w_p[-1]) <= 1.0 + 1e-9:
                break  # prices are dual feasible: no improving atom exists
            atoms.append(v_p[:, -1])
        else:
            break

    coeff = res.x
    a = np.stack(atoms[: coeff.size], axis=1)
    x_star = (a * coeff) @ a.conj().T
    x_star = 0.5 * (x_star + x_star.conj().T)
    vals = np.real(np.einsum("ki,ij,kj->k", h.conj(), x_star, h))
    x_star = x_star * (gamma / float(vals.min()))  # exact feasibility of the min gap

    bound = gamma / (sigma**2 * best_p)
    return BoundEstimate(
        x_star=x_star,
        bound=bound,
        p_certified=best_p,
        p_primal=float(np.trace(x_star).real),
        sweeps=sweeps,
    )
