"""Channel generation, truncated SVD, water-filling, rate and capacity.

The achievable rate treats inter-stream interference as noise; with the
optimal combiner/precoder pair (scaled truncated singular-vector factors) and
water-filled powers it collapses to the water-filling capacity, including the
factor-of-4 gain penalty of passive network realizations (precoder and
combiner each carry a factor 1/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChannelRealization",
    "rayleigh_channel",
    "truncated_svd",
    "water_filling",
    "achievable_rate",
    "capacity",
]


def truncated_svd(h, n_streams: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Leading n_streams singular triplets of h, deterministically normalized.

    Singular values come ordered nonincreasing (ties keep LAPACK's stable
    order). Each right-vector column is rotated by a unit phase so that its
    largest-magnitude entry (first index on ties) is real positive; the
    matching left column is rotated by the same phase, preserving
    h @ right = left * sigma.

    Returns:
        (left, sigma, right): N_R x k, k, N_T x k with k = n_streams.
    """
    arr = np.asarray(h, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"channel must be a 2-d matrix, got shape {arr.shape}")
    k = int(n_streams)
    if not 1 <= k <= min(arr.shape):
        raise ValueError(
            f"n_streams must be in 1..min{arr.shape} = {min(arr.shape)}, got {n_streams}"
        )
    u, s, vh = np.linalg.svd(arr, full_matrices=False)
    left = u[:, :k].copy()
    sigma = s[:k].copy()
    right = vh[:k].conj().T.copy()
    for j in range(k):
        idx = int(np.argmax(np.abs(right[:, j])))
        pivot = right[idx, j]
        mag = abs(pivot)
        if mag > 0.0:
            phase = np.conj(pivot) / mag
            right[:, j] *= phase
            left[:, j] *= phase
    return left, sigma, right


@dataclass(frozen=True)
class ChannelRealization:
    """A channel matrix together with its leading singular triplets.

    Attributes:
        h: Complex N_R x N_T channel matrix.
        left: N_R x N_S truncated left singular vectors (orthonormal columns).
        sigma: N_S singular values, nonincreasing, positive.
        right: N_T x N_S truncated right singular vectors.
    """

    h: np.ndarray
    left: np.ndarray
    sigma: np.ndarray
    right: np.ndarray

    @property
    def n_rx(self) -> int:
        return self.h.shape[0]

    @property
    def n_tx(self) -> int:
        return self.h.shape[1]

    @property
    def n_streams(self) -> int:
        return self.sigma.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        """Leading eigenvalues of h h^H: squared singular values."""
        return self.sigma**2

    @classmethod
    def from_matrix(cls, h, n_streams: int | None = None) -> "ChannelRealization":
        arr = np.asarray(h, dtype=complex)
        k = min(arr.shape) if n_streams is None else int(n_streams)
        left, sigma, right = truncated_svd(arr, k)
        return cls(arr, left, sigma, right)


def rayleigh_channel(
    n_rx: int, n_tx: int, seed, n_streams: int | None = None
) -> ChannelRealization:
    """Draw an i.i.d. complex Gaussian channel, unit entry variance.

    Args:
        n_rx, n_tx: Channel dimensions, >= 1.
        seed: Integer seed or numpy Generator; same seed, same channel.
        n_streams: Truncation depth of the attached SVD; None keeps all
            min(n_rx, n_tx) triplets.
    """
    if n_rx < 1 or n_tx < 1:
        raise ValueError(f"dimensions must be >= 1, got ({n_rx}, {n_tx})")
    rng = np.random.default_rng(seed)
    h = (rng.standard_normal((n_rx, n_tx)) + 1j * rng.standard_normal((n_rx, n_tx)))
    h /= np.sqrt(2.0)
    return ChannelRealization.from_matrix(h, n_streams)


def water_filling(eigenvalues, p_tx: float, noise_power: float) -> np.ndarray:
    """Optimal power fractions for parallel channels with a unit power budget.

    Maximizes sum_s log2(1 + g_s p_s) with gains g_s = p_tx * lambda_s /
    (4 noise_power) subject to sum p_s = 1, p_s >= 0, using the exact
    active-set waterline: gains sorted descending (ties keep original order),
    the support is the largest prefix whose waterline clears its weakest gain.

    Returns:
        Power fractions in the original eigenvalue order.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.ndim != 1 or lam.size < 1:
        raise ValueError(f"eigenvalues must be a nonempty vector, got shape {lam.shape}")
    if np.any(lam <= 0.0) or not np.all(np.isfinite(lam)):
        raise ValueError("eigenvalues must be positive and finite")
    if p_tx <= 0.0 or noise_power <= 0.0:
        raise ValueError("p_tx and noise_power must be positive")
    gains = p_tx * lam / (4.0 * noise_power)
    order = np.argsort(-gains, kind="stable")
    inv_sorted = 1.0 / gains[order]
    prefix = np.cumsum(inv_sorted)
    support = 0
    for k in range(1, lam.size + 1):
        waterline = (1.0 + prefix[k - 1]) / k
        if waterline > inv_sorted[k - 1]:
            support = k
    waterline = (1.0 + prefix[support - 1]) / support
    p_sorted = np.zeros_like(gains)
    p_sorted[:support] = waterline - inv_sorted[:support]
    p = np.zeros_like(gains)
    p[order] = p_sorted
    return p


def achievable_rate(g, h, f, p, p_tx: float, noise_power: float) -> float:
    """Sum rate with inter-stream interference treated as noise (bits/s/Hz).

    Stream s sees signal power p_tx p_s |t_ss|^2 and interference
    p_tx sum_{t != s} p_t |t_st|^2 with t = g @ h @ f, plus thermal noise
    scaled by its combiner row power. A zero combiner row contributes zero
    rate (vanishing-gain limit).
    """
    g = np.asarray(g, dtype=complex)
    h = np.asarray(h, dtype=complex)
    f = np.asarray(f, dtype=complex)
    p = np.asarray(p, dtype=float)
    n_streams = g.shape[0]
    if f.shape[1] != n_streams or p.shape != (n_streams,):
        raise ValueError(
            f"inconsistent stream counts: g {g.shape}, f {f.shape}, p {p.shape}"
        )
    if g.shape[1] != h.shape[0] or h.shape[1] != f.shape[0]:
        raise ValueError(f"shapes do not chain: g {g.shape}, h {h.shape}, f {f.shape}")
    if p_tx <= 0.0 or noise_power <= 0.0:
        raise ValueError("p_tx and noise_power must be positive")
    t_abs2 = np.abs(g @ h @ f) ** 2
    signal = p_tx * p * np.diag(t_abs2)
    interference = p_tx * (t_abs2 @ p - p * np.diag(t_abs2))
    row_noise = noise_power * np.sum(np.abs(g) ** 2, axis=1)
    total = 0.0
    for s in range(n_streams):
        denom = interference[s] + row_noise[s]
        if denom == 0.0:
            continue
        total += float(np.log2(1.0 + signal[s] / denom))
    return total


def capacity(eigenvalues, p, p_tx: float, noise_power: float) -> float:
    """Water-filling capacity value for the given power fractions (bits/s/Hz).

    Evaluates sum_s log2(1 + p_tx p_s lambda_s / (4 noise_power)); with p from
    water_filling this is the best rate any passive network pair can achieve.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    pw = np.asarray(p, dtype=float)
    if lam.shape != pw.shape:
        raise ValueError(f"shape mismatch: eigenvalues {lam.shape}, p {pw.shape}")
    snr = p_tx * pw * lam / (4.0 * noise_power)
    return float(np.sum(np.log2(1.0 + snr)))
