"""
Exact (full-frame, time-varying) linear MMSE equalizer with a priori
information, producing extrinsic bit LLRs for Gray QPSK.

For symbol n the prior of n itself is excluded (mean 0, variance 1):

    f_n  = (H V(n) H^H + sigma2 I)^-1 h_n
    s_n  = f_n^H (r - H xbar(n))
    mu_n = f_n^H h_n
    L_I  = 2 sqrt(2) Re(s_n) / (1 - mu_n),  L_Q likewise with Im

H is the (N + T - 1) x N full-convolution matrix.
"""
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import solveh_banded

from teq.channel.isi import ChannelModel
from teq.core.errors import ConfigError, LengthMismatchError
from teq.core.llr import LLR_MAX, as_llrs

SQRT2 = np.sqrt(2.0)

EqualizerMethod = Literal["banded", "dense"]


@dataclass
class EqualizerInput:
    received: np.ndarray
    channel: ChannelModel
    sigma2: float
    priors: np.ndarray = field(default=None)  # (N_sym, 2): I and Q bit LLRs

    def __post_init__(self):
        self.received = np.asarray(self.received, dtype=np.complex128).ravel()
        if not np.isfinite(self.received).all():
            raise ConfigError("received samples must be finite")
        if self.sigma2 <= 0:
            raise ConfigError(f"noise variance must be positive, got {self.sigma2}")
        n_sym = self.n_symbols
        if n_sym <= 0:
            raise LengthMismatchError(
                f"{self.received.size} samples cannot come from a {self.channel.length}-tap channel"
            )
        if self.priors is None:
            self.priors = np.zeros((n_sym, 2))
        self.priors = as_llrs(self.priors).reshape(-1, 2)
        if self.priors.shape[0] != n_sym:
            raise LengthMismatchError(f"{self.priors.shape[0]} prior pairs for {n_sym} symbols")

    @property
    def n_symbols(self) -> int:
        return self.received.size - self.channel.length + 1


@dataclass
class EqualizerOutput:
    extrinsic: np.ndarray  # (N_sym, 2)
    mu: np.ndarray  # (N_sym,)


def symbol_stats(priors) -> tuple[np.ndarray, np.ndarray]:
    """
    Prior mean and variance of unit-energy Gray QPSK symbols from (L_I, L_Q)
    pairs. Accepts a single pair or an (N, 2) array.
    """
    p = as_llrs(priors)
    p2 = p.reshape(-1, 2)
    mean = (np.tanh(p2[:, 0] / 2.0) + 1j * np.tanh(p2[:, 1] / 2.0)) / SQRT2
    var = np.clip(1.0 - np.abs(mean) ** 2, 0.0, 1.0)
    if p.ndim == 1:
        return mean[0], var[0]
    return mean, var


def convolution_matrix(channel: ChannelModel, n_sym: int) -> np.ndarray:
    taps = channel.taps
    H = np.zeros((n_sym + taps.size - 1, n_sym), dtype=np.complex128)
    cols = np.arange(n_sym)
    for k, h in enumerate(taps):
        H[cols + k, cols] = h
    return H


def _to_llrs(s_hat: np.ndarray, mu: np.ndarray) -> np.ndarray:
    mu = np.clip(mu, 0.0, 1.0)
    # mu = 1 means a perfect estimate: saturate with the right sign
    denom = np.maximum(1.0 - mu, np.finfo(np.float64).tiny)
    with np.errstate(over="ignore"):
        llr_i = 2.0 * SQRT2 * s_hat.real / denom
        llr_q = 2.0 * SQRT2 * s_hat.imag / denom
    return np.clip(np.stack([llr_i, llr_q], axis=1), -LLR_MAX, LLR_MAX)


def _equalize_dense(eq_in: EqualizerInput) -> EqualizerOutput:
    """Literal per-symbol solve of the post-condition."""
    n_sym = eq_in.n_symbols
    H = convolution_matrix(eq_in.channel, n_sym)
    mean, var = symbol_stats(eq_in.priors)
    eye = np.eye(H.shape[0])

    s_hat = np.empty(n_sym, dtype=np.complex128)
    mu = np.empty(n_sym)
    for n in range(n_sym):
        v_n = var.copy()
        v_n[n] = 1.0
        x_n = mean.copy()
        x_n[n] = 0.0
        cov = (H * v_n) @ H.conj().T + eq_in.sigma2 * eye
        f = np.linalg.solve(cov, H[:, n])
        s_hat[n] = np.vdot(f, eq_in.received - H @ x_n)
        mu[n] = np.vdot(f, H[:, n]).real
    return EqualizerOutput(extrinsic=_to_llrs(s_hat, mu), mu=np.clip(mu, 0.0, 1.0))


def _equalize_banded(eq_in: EqualizerInput) -> EqualizerOutput:
    """
    One banded Hermitian solve for all symbols, then a rank-one correction per
    symbol that swaps its own prior variance for 1 (Sherman-Morrison).
    """
    n_sym = eq_in.n_symbols
    taps = eq_in.channel.length
    H = convolution_matrix(eq_in.channel, n_sym)
    mean, var = symbol_stats(eq_in.priors)

    cov = (H * var) @ H.conj().T
    cov[np.diag_indices_from(cov)] += eq_in.sigma2
    size = cov.shape[0]
    bands = np.zeros((taps, size), dtype=np.complex128)
    for i in range(taps):
        bands[i, : size - i] = np.diagonal(cov, offset=-i)

    if taps == 1:
        G = H / bands[0, :, np.newaxis]
    else:
        G = solveh_banded(bands, H, lower=True)

    q = np.einsum("ij,ij->j", H.conj(), G).real
    denom = 1.0 + (1.0 - var) * q
    residual = eq_in.received - H @ mean
    s_hat = (G.conj().T @ residual + q * mean) / denom
    mu = q / denom
    return EqualizerOutput(extrinsic=_to_llrs(s_hat, mu), mu=np.clip(mu, 0.0, 1.0))


def equalize(eq_in: EqualizerInput, method: EqualizerMethod = "banded") -> EqualizerOutput:
    if method == "dense":
        return _equalize_dense(eq_in)
    return _equalize_banded(eq_in)
