"""Channel draws, deterministic SVD, water-filling, rate and capacity."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complex_gaussian, semi_unitary
from milackit.chancap import (
    ChannelRealization,
    achievable_rate,
    capacity,
    rayleigh_channel,
    truncated_svd,
    water_filling,
)


def waterfill_oracle(gains: np.ndarray) -> np.ndarray:
    """Exhaustive active-set search over every support set."""
    n = gains.size
    best = None
    for size in range(1, n + 1):
        for support in combinations(range(n), size):
            mu = (1.0 + sum(1.0 / gains[i] for i in support)) / size
            p = np.zeros(n)
            for i in support:
                p[i] = mu - 1.0 / gains[i]
            if np.any(p[list(support)] <= 0):
                continue
            # inactive streams must not want power at this waterline
            if any(mu > 1.0 / gains[j] + 1e-12 for j in range(n) if j not in support):
                continue
            value = np.sum(np.log2(1.0 + gains * p))
            if best is None or value > best[0] + 1e-15:
                best = (value, p)
    assert best is not None
    return best[1]


# ------------------------------------------------------------ truncated_svd

def test_svd_diagonal_channel():
    left, sigma, right = truncated_svd(np.diag([3.0, 2.0, 1.0]).astype(complex), 2)
    np.testing.assert_allclose(sigma, [3.0, 2.0])
    np.testing.assert_allclose(left, np.eye(3, 2), atol=1e-15)
    np.testing.assert_allclose(right, np.eye(3, 2), atol=1e-15)


def test_svd_of_unitary_matrix_has_unit_singular_values():
    q = np.linalg.qr(complex_gaussian(np.random.default_rng(2), 5, 5))[0]
    _, sigma, _ = truncated_svd(q, 3)
    np.testing.assert_allclose(sigma, np.ones(3), atol=1e-12)


def test_svd_full_reconstruction():
    rng = np.random.default_rng(3)
    h = complex_gaussian(rng, 6, 4)
    left, sigma, right = truncated_svd(h, 4)
    err = np.linalg.norm(h - left @ np.diag(sigma) @ right.conj().T)
    assert err <= 1e-10 * np.linalg.norm(h)


@pytest.mark.parametrize("seed", range(8))
def test_svd_invariants(seed):
    rng = np.random.default_rng(seed)
    h = complex_gaussian(rng, 7, 5)
    k = 3
    left, sigma, right = truncated_svd(h, k)
    assert np.all(np.diff(sigma) <= 0)
    np.testing.assert_allclose(left.conj().T @ left, np.eye(k), atol=1e-12)
    np.testing.assert_allclose(right.conj().T @ right, np.eye(k), atol=1e-12)
    np.testing.assert_allclose(h @ right, left * sigma, atol=1e-10)


@pytest.mark.parametrize("seed", range(8))
def test_svd_phase_normalization_pins_right_columns(seed):
    h = complex_gaussian(np.random.default_rng(seed), 6, 6)
    _, _, right = truncated_svd(h, 4)
    for j in range(4):
        idx = np.argmax(np.abs(right[:, j]))
        pivot = right[idx, j]
        assert pivot.real > 0
        assert abs(pivot.imag) <= 1e-14


def test_svd_is_deterministic():
    h = complex_gaussian(np.random.default_rng(9), 5, 5)
    a = truncated_svd(h, 3)
    b = truncated_svd(h.copy(), 3)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_svd_validates_stream_count():
    h = np.eye(3, dtype=complex)
    with pytest.raises(ValueError):
        truncated_svd(h, 4)
    with pytest.raises(ValueError):
        truncated_svd(h, 0)


# -------------------------------------------------------- ChannelRealization

def test_channel_realization_from_matrix_defaults_to_full_rank():
    h = complex_gaussian(np.random.default_rng(0), 4, 6)
    chan = ChannelRealization.from_matrix(h)
    assert chan.n_streams == 4
    assert chan.n_rx == 4 and chan.n_tx == 6
    np.testing.assert_allclose(chan.eigenvalues, chan.sigma**2)


def test_rayleigh_channel_is_seed_deterministic():
    a = rayleigh_channel(4, 3, seed=123, n_streams=2)
    b = rayleigh_channel(4, 3, seed=123, n_streams=2)
    assert np.array_equal(a.h, b.h)
    assert np.array_equal(a.right, b.right)
    assert not np.array_equal(a.h, rayleigh_channel(4, 3, seed=124, n_streams=2).h)


def test_rayleigh_channel_unit_mean_square():
    # 1e5 entries; frozen seeds, checked once against the law of large numbers
    total, count = 0.0, 0
    for seed in range(10):
        h = rayleigh_channel(100, 100, seed=seed).h
        total += float(np.sum(np.abs(h) ** 2))
        count += h.size
    assert 0.99 <= total / count <= 1.01


def test_rayleigh_channel_vec_covariance_near_identity():
    # 1e4 realizations of a 2x2 channel; empirical covariance within 5%
    draws = np.array([rayleigh_channel(2, 2, seed=s).h.ravel() for s in range(10_000)])
    cov = draws.conj().T @ draws / draws.shape[0]
    assert np.max(np.abs(cov - np.eye(4))) <= 0.05


# ------------------------------------------------------------ water_filling

def test_waterfill_equal_gains_split_evenly():
    np.testing.assert_allclose(water_filling(np.array([4.0, 4.0]), 3.0, 1.0), [0.5, 0.5])


def test_waterfill_single_stream_takes_everything():
    np.testing.assert_allclose(water_filling(np.array([2.5]), 1.0, 1.0), [1.0])


def test_waterfill_drops_weak_stream():
    # gains (2, 0.5): waterline over both would sit below the weak stream
    p = water_filling(np.array([8.0, 2.0]), 1.0, 1.0)
    np.testing.assert_allclose(p, [1.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("seed", range(25))
def test_waterfill_matches_exhaustive_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    lam = rng.uniform(0.05, 10.0, size=n)
    p_tx = float(rng.uniform(0.1, 20.0))
    p = water_filling(lam, p_tx, 1.0)
    gains = p_tx * lam / 4.0
    np.testing.assert_allclose(p, waterfill_oracle(gains), atol=1e-10)
    assert np.sum(p) == pytest.approx(1.0, abs=1e-12)
    assert np.all(p >= 0)


def test_waterfill_scale_invariance():
    lam = np.array([1.0, 3.0, 0.2])
    a = water_filling(lam, 2.0, 0.5)
    b = water_filling(lam, 20.0, 5.0)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_waterfill_handles_tied_gains_stably():
    p = water_filling(np.array([5.0, 5.0, 5.0]), 1.0, 1.0)
    np.testing.assert_allclose(p, np.full(3, 1 / 3), atol=1e-15)


def test_waterfill_rejects_bad_inputs():
    with pytest.raises(ValueError):
        water_filling(np.array([1.0, -2.0]), 1.0, 1.0)
    with pytest.raises(ValueError):
        water_filling(np.array([1.0]), 0.0, 1.0)
    with pytest.raises(ValueError):
        water_filling(np.array([1.0]), 1.0, -1.0)


# ------------------------------------------------------- rate and capacity

def test_zero_precoder_or_combiner_gives_zero_rate():
    rng = np.random.default_rng(1)
    h = complex_gaussian(rng, 4, 4)
    f = complex_gaussian(rng, 4, 2)
    g = complex_gaussian(rng, 2, 4)
    p = np.array([0.5, 0.5])
    assert achievable_rate(g, h, np.zeros((4, 2)), p, 1.0, 1.0) == 0.0
    assert achievable_rate(np.zeros((2, 4)), h, f, p, 1.0, 1.0) == 0.0


def test_capacity_trivial_values():
    assert capacity(np.array([4.0]), np.array([1.0]), 1.0, 1.0) == pytest.approx(1.0)
    assert capacity(np.array([4.0, 4.0]), np.array([0.5, 0.5]), 2.0, 1.0) == pytest.approx(2.0)


@pytest.mark.parametrize("seed", range(10))
def test_optimal_design_achieves_capacity(seed):
    chan = rayleigh_channel(6, 5, seed=seed, n_streams=3)
    p_tx, noise = 10.0, 1.0
    p = water_filling(chan.eigenvalues, p_tx, noise)
    g = 0.5 * chan.left.conj().T
    f = 0.5 * chan.right
    rate = achievable_rate(g, chan.h, f, p, p_tx, noise)
    cap = capacity(chan.eigenvalues, p, p_tx, noise)
    assert abs(rate - cap) <= 1e-10 * cap
    # no residual inter-stream coupling at the optimum
    t = g @ chan.h @ f
    off = t - np.diag(np.diag(t))
    assert np.max(np.abs(off)) <= 1e-10
    # per-stream signal-to-noise matches the analytic value
    for s in range(3):
        snr = p_tx * p[s] * abs(t[s, s]) ** 2 / (np.linalg.norm(g[s]) ** 2 * noise)
        expected = p_tx * p[s] * chan.eigenvalues[s] / (4 * noise)
        if p[s] > 0:
            assert snr == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("seed", range(100))
def test_random_designs_never_beat_capacity(seed):
    rng = np.random.default_rng(seed)
    chan = rayleigh_channel(4, 4, seed=seed, n_streams=2)
    # passive-scale random designs, comparable to the optimal half-unitaries
    f = 0.5 * semi_unitary(rng, 4, 2)
    g = 0.5 * semi_unitary(rng, 4, 2).conj().T
    p = np.full(2, 0.5)
    p_tx, noise = 10.0, 1.0
    p_star = water_filling(chan.eigenvalues, p_tx, noise)
    cap = capacity(chan.eigenvalues, p_star, p_tx, noise)
    assert achievable_rate(g, chan.h, f, p, p_tx, noise) <= cap + 1e-12


def test_rate_invariant_to_per_stream_phases():
    rng = np.random.default_rng(8)
    chan = rayleigh_channel(5, 5, seed=8, n_streams=3)
    p = water_filling(chan.eigenvalues, 4.0, 1.0)
    g = 0.5 * chan.left.conj().T
    f = 0.5 * chan.right
    base = achievable_rate(g, chan.h, f, p, 4.0, 1.0)
    phi = rng.uniform(0, 2 * np.pi, 3)
    psi = rng.uniform(0, 2 * np.pi, 3)
    rotated = achievable_rate(
        np.exp(1j * psi)[:, None] * g, chan.h, f * np.exp(1j * phi)[None, :], p, 4.0, 1.0
    )
    assert rotated == pytest.approx(base, rel=1e-14)


def test_zero_combiner_row_contributes_zero_rate():
    rng = np.random.default_rng(12)
    chan = rayleigh_channel(4, 4, seed=12, n_streams=2)
    g = 0.5 * chan.left.conj().T
    g[1, :] = 0.0
    f = 0.5 * chan.right
    p = np.array([0.5, 0.5])
    full = achievable_rate(0.5 * chan.left.conj().T, chan.h, f, p, 1.0, 1.0)
    partial = achievable_rate(g, chan.h, f, p, 1.0, 1.0)
    assert 0.0 < partial < full


@given(
    lam=st.lists(st.floats(min_value=0.1, max_value=50.0), min_size=1, max_size=6),
    scale=st.floats(min_value=1.1, max_value=4.0),
)
def test_capacity_monotone_in_snr_and_eigenvalues(lam, scale):
    lam = np.asarray(lam)
    p = water_filling(lam, 1.0, 1.0)
    base = capacity(lam, p, 1.0, 1.0)
    assert capacity(lam, p, scale, 1.0) >= base
    assert capacity(lam * scale, p, 1.0, 1.0) >= base
