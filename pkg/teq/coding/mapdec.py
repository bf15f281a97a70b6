"""
Log-domain BCJR over a terminated feedforward trellis, and the two ways of
turning its output into extrinsic information for the equalizer:

- COD-MAP:  coded-bit APP minus the decoder's coded-bit input
- MAP-SBVP: info-bit APP re-encoded by the soft-convolution encoder
"""
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from scipy.special import logsumexp

from teq.coding.convcode import CodeSpec, Trellis, soft_encode
from teq.core.errors import LengthMismatchError
from teq.core.llr import LLR_MAX, SoftXor, as_llrs, hard_decide

DecoderAlgo = Literal["log-map", "max-log"]


@dataclass
class DecoderInput:
    coded_llrs: np.ndarray
    info_priors: Optional[np.ndarray] = None

    def __post_init__(self):
        self.coded_llrs = as_llrs(self.coded_llrs).ravel()
        if self.info_priors is not None:
            self.info_priors = as_llrs(self.info_priors).ravel()


@dataclass
class DecoderOutput:
    info_app: np.ndarray  # info + tail positions
    coded_app: np.ndarray
    info_hard: np.ndarray  # info positions only


def _combine_pair(a: np.ndarray, b: np.ndarray, algo: DecoderAlgo) -> np.ndarray:
    if algo == "max-log":
        return np.maximum(a, b)
    return np.logaddexp(a, b)


def _combine_rows(metrics: np.ndarray, mask: np.ndarray, algo: DecoderAlgo) -> np.ndarray:
    """Combine metrics[t, e] over the edges selected by mask, per time step."""
    sel = np.where(mask[np.newaxis, :], metrics, -np.inf)
    if algo == "max-log":
        return np.max(sel, axis=1)
    return logsumexp(sel, axis=1)


def bcjr(dec_in: DecoderInput, trellis: Trellis, algo: DecoderAlgo = "log-map") -> DecoderOutput:
    """
    Forward/backward recursion with start and end state pinned to 0.
    Branch metric: sum_i (1-2c_i) L_in(i)/2 + (1-2u) L_prior(u)/2.
    """
    n = trellis.outputs.shape[2]
    memory = trellis.code.memory
    coded = dec_in.coded_llrs
    if coded.size % n:
        raise LengthMismatchError(f"{coded.size} coded LLRs is not a multiple of {n}")
    steps = coded.size // n
    if steps <= memory:
        raise LengthMismatchError(f"{steps} trellis steps cannot hold a {memory}-bit tail")
    priors = dec_in.info_priors
    if priors is None:
        priors = np.zeros(steps)
    elif priors.size != steps:
        raise LengthMismatchError(f"{priors.size} info priors for {steps} trellis steps")

    signs_c = 1.0 - 2.0 * trellis.edge_output.astype(np.float64)  # (E, n)
    signs_u = 1.0 - 2.0 * trellis.edge_input.astype(np.float64)  # (E,)
    gamma = 0.5 * coded.reshape(steps, n) @ signs_c.T + 0.5 * np.outer(priors, signs_u)

    num_states = trellis.num_states
    alpha = np.full((steps + 1, num_states), -np.inf)
    beta = np.full((steps + 1, num_states), -np.inf)
    alpha[0, 0] = 0.0
    beta[steps, 0] = 0.0

    inc = trellis.incoming
    out = trellis.outgoing
    with np.errstate(invalid="ignore"):
        for t in range(steps):
            vals = alpha[t, trellis.from_state] + gamma[t]
            nxt = _combine_pair(vals[inc[:, 0]], vals[inc[:, 1]], algo)
            alpha[t + 1] = nxt - nxt.max()

        for t in range(steps - 1, -1, -1):
            vals = gamma[t] + beta[t + 1, trellis.to_state]
            prev = _combine_pair(vals[out[:, 0]], vals[out[:, 1]], algo)
            beta[t] = prev - prev.max()

    metrics = alpha[:-1, trellis.from_state] + gamma + beta[1:, trellis.to_state]

    with np.errstate(divide="ignore", invalid="ignore"):
        u0 = trellis.edge_input == 0
        info_app = _combine_rows(metrics, u0, algo) - _combine_rows(metrics, ~u0, algo)

        coded_app = np.empty((steps, n))
        for i in range(n):
            c0 = trellis.edge_output[:, i] == 0
            coded_app[:, i] = _combine_rows(metrics, c0, algo) - _combine_rows(metrics, ~c0, algo)

    assert not np.isnan(info_app).any() and not np.isnan(coded_app).any(), "non-finite BCJR metrics"
    info_app = np.clip(info_app, -LLR_MAX, LLR_MAX)
    coded_app = np.clip(coded_app.ravel(), -LLR_MAX, LLR_MAX)

    return DecoderOutput(
        info_app=info_app,
        coded_app=coded_app,
        info_hard=hard_decide(info_app[: steps - memory]),
    )


def extrinsic_cod_map(dec_out: DecoderOutput, dec_in: DecoderInput) -> np.ndarray:
    if dec_out.coded_app.size != dec_in.coded_llrs.size:
        raise LengthMismatchError(
            f"coded APP has {dec_out.coded_app.size} entries, decoder input {dec_in.coded_llrs.size}"
        )
    return np.clip(dec_out.coded_app - dec_in.coded_llrs, -LLR_MAX, LLR_MAX)


def extrinsic_map_sbvp(dec_out: DecoderOutput, code: CodeSpec, mode: SoftXor = "approx") -> np.ndarray:
    """Re-encode the info APP (info + tail) with the soft-convolution encoder."""
    return soft_encode(dec_out.info_app, code, mode=mode)
