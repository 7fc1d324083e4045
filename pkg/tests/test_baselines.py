import numpy as np
import pytest

from pocsbeam import (
    ChannelSet,
    SystemConfig,
    feasibility_loss,
    min_snr,
    outer,
    rand_a,
    reference_schedule,
    sdp_bound_estimate,
    to_db,
)
from pocsbeam.eigen import eig_oracle
from pocsbeam.projections import FeasibilitySpec
from conftest import random_channels


def test_reference_schedule_values():
    s = reference_schedule(10)
    assert len(s) == 10
    np.testing.assert_array_equal(s.lambdas, np.full(10, 1.9))
    assert s.betas[0] ** 2 == pytest.approx(0.9 * np.exp(-1 / 500.0), rel=1e-12)
    assert s.betas[0] ** 2 == pytest.approx(0.89820, abs=5e-6)


def test_reference_schedule_beta_sq_decreasing_bounded():
    s = reference_schedule(200)
    b2 = s.betas**2
    assert np.all(np.diff(b2) < 0)
    assert np.all(b2 > 0) and np.all(b2 <= 0.9)
    with pytest.raises(ValueError):
        reference_schedule(0)


def test_rand_a_rank_one_collinear(rng):
    ch = random_channels(61, n=4, k=3)
    w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    best = rand_a(outer(w), ch, n_samples=25, seed=3)
    target = min_snr(w, ch)
    assert min_snr(best, ch) == pytest.approx(target, rel=1e-9)
    # every candidate is parallel to w, so one sample suffices too
    one = rand_a(outer(w), ch, n_samples=1, seed=123)
    assert min_snr(one, ch) == pytest.approx(target, rel=1e-9)


def test_rand_a_deterministic():
    ch = random_channels(62, n=4, k=3)
    x = np.eye(4, dtype=complex)
    a = rand_a(x, ch, n_samples=5, seed=42)
    b = rand_a(x, ch, n_samples=5, seed=42)
    np.testing.assert_array_equal(a, b)


def test_rand_a_monotone_in_samples():
    ch = random_channels(63, n=4, k=4)
    x = np.eye(4, dtype=complex)
    vals = [min_snr(rand_a(x, ch, n_samples=n, seed=7), ch) for n in (1, 5, 20, 100)]
    for lo, hi in zip(vals, vals[1:]):
        assert hi >= lo - 1e-15


def test_rand_a_candidates_unit_norm():
    # with X = I the candidate norm equals ||e|| = 1 exactly
    ch = random_channels(64, n=5, k=3)
    best = rand_a(np.eye(5, dtype=complex), ch, n_samples=10, seed=9)
    assert np.linalg.norm(best) == pytest.approx(1.0, abs=1e-12)


def test_rand_a_rejects_bad_inputs(rng):
    ch = random_channels(65, n=3, k=2)
    with pytest.raises(ValueError):
        rand_a(-np.eye(3, dtype=complex), ch, n_samples=2, seed=0)
    with pytest.raises(ValueError):
        rand_a(np.zeros((3, 3), complex), ch, n_samples=2, seed=0)
    with pytest.raises(ValueError):
        rand_a(np.eye(3, dtype=complex), ch, n_samples=0, seed=0)


def test_bound_single_user_matched_filter():
    # K = 1, h = e1: minimal power gamma/||h||^2 = 1 and bound 0 dB
    cfg = SystemConfig(n_antennas=4, n_users=1)
    h = np.zeros((1, 4), complex)
    h[0, 0] = 1.0
    ch = ChannelSet(config=cfg, channels=h)
    est = sdp_bound_estimate(ch, tol=1e-6, iter_cap=200)
    assert est.p_certified == pytest.approx(1.0, rel=1e-9)
    assert est.bound == pytest.approx(1.0, rel=1e-9)
    assert est.p_primal == pytest.approx(1.0, rel=1e-9)


def test_bound_dominates_any_beamformer(rng):
    for seed in (71, 72, 73):
        ch = random_channels(seed, n=5, k=6)
        est = sdp_bound_estimate(ch)
        for _ in range(20):
            w = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            assert to_db(est.bound) >= to_db(min_snr(w, ch)) - 1e-9
        # the randomized baseline on x_star cannot beat the bound either
        w = rand_a(est.x_star, ch, n_samples=50, seed=seed)
        assert to_db(est.bound) >= to_db(min_snr(w, ch)) - 1e-9


def test_bound_witness_is_feasible_psd():
    ch = random_channels(75, n=5, k=7)
    est = sdp_bound_estimate(ch)
    spec = FeasibilitySpec.from_channels(ch)
    assert feasibility_loss(est.x_star, spec) <= 1e-9
    w, _ = eig_oracle(est.x_star)
    assert w[-1] >= -1e-8
    assert est.p_primal >= est.p_certified - 1e-9
    assert est.gap < 0.2


def test_bound_tightens_as_tol_shrinks():
    ch = random_channels(76, n=5, k=8)
    bounds = [
        sdp_bound_estimate(ch, tol=t, iter_cap=2000).bound for t in (1e-2, 1e-3, 1e-4)
    ]
    # the refinement extends one deterministic trajectory, so the certified
    # bound can only move down, by ever smaller amounts
    assert bounds[1] <= bounds[0]
    assert bounds[2] <= bounds[1]
    assert abs(bounds[2] - bounds[1]) <= abs(bounds[1] - bounds[0]) + 1e-9 * bounds[0]


def test_bound_validates_args():
    ch = random_channels(77, n=3, k=2)
    with pytest.raises(ValueError):
        sdp_bound_estimate(ch, tol=0.0)
    with pytest.raises(ValueError):
        sdp_bound_estimate(ch, iter_cap=0)
