"""
LLR algebra.

Convention: L(b) = ln(P(b=0) / P(b=1)), so a non-negative LLR decides bit 0.
Every function accepts scalars or numpy arrays and broadcasts; scalar inputs
come back as Python floats/ints.
"""
from functools import reduce
from typing import Iterable, Literal, Union

import numpy as np
import numpy.typing as npt

from teq.core.errors import TeqError

LLR_MAX = 300.0

SoftXor = Literal["approx", "exact"]

ArrayLike = Union[float, npt.ArrayLike]


def _out(x: np.ndarray):
    return x.item() if x.ndim == 0 else x


def as_llrs(values: ArrayLike) -> np.ndarray:
    """
    Build an LLR array: float64, clamped to +-LLR_MAX.
    Infinities saturate; NaN is rejected.
    """
    arr = np.asarray(values, dtype=np.float64)
    if np.isnan(arr).any():
        raise TeqError("NaN is not a valid LLR")
    return np.clip(arr, -LLR_MAX, LLR_MAX)


def sign(x: ArrayLike):
    """-1 for x < 0, +1 otherwise (zero maps to +1)."""
    arr = np.asarray(x, dtype=np.float64)
    return _out(np.where(arr < 0, -1, 1))


def hard_decide(llr: ArrayLike):
    """Bit 0 for L >= 0, bit 1 for L < 0."""
    arr = np.asarray(llr, dtype=np.float64)
    return _out((arr < 0).astype(np.uint8))


def soft_xor_approx(v1: ArrayLike, v2: ArrayLike):
    """Min-sum box-plus: sign(v1) sign(v2) min(|v1|, |v2|)."""
    a = np.asarray(v1, dtype=np.float64)
    b = np.asarray(v2, dtype=np.float64)
    s = np.where(a < 0, -1.0, 1.0) * np.where(b < 0, -1.0, 1.0)
    return _out(s * np.minimum(np.abs(a), np.abs(b)))


def soft_xor_exact(v1: ArrayLike, v2: ArrayLike):
    """
    Exact box-plus 2 atanh(tanh(v1/2) tanh(v2/2)).

    Small magnitudes go through the tanh product, large ones through
    min(|a|,|b|) + log1p(e^-(|a|+|b|)) - log1p(e^-||a|-|b||), each form being
    accurate where the other loses digits.
    """
    a = np.asarray(v1, dtype=np.float64)
    b = np.asarray(v2, dtype=np.float64)
    s = np.where(a < 0, -1.0, 1.0) * np.where(b < 0, -1.0, 1.0)
    x, y = np.abs(a), np.abs(b)
    m = np.minimum(x, y)

    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        via_tanh = 2.0 * np.arctanh(np.tanh(x / 2.0) * np.tanh(y / 2.0))
        via_log = m + np.log1p(np.exp(-(x + y))) - np.log1p(np.exp(-np.abs(x - y)))
    mag = np.where(m < 1.0, via_tanh, via_log)
    # |exact| <= min(|a|, |b|) must survive rounding
    mag = np.clip(mag, 0.0, m)
    return _out(s * mag)


def soft_xor(v1: ArrayLike, v2: ArrayLike, mode: SoftXor = "approx"):
    if mode == "exact":
        return soft_xor_exact(v1, v2)
    return soft_xor_approx(v1, v2)


def soft_xor_fold(values: Iterable[ArrayLike], mode: SoftXor = "approx"):
    """Left fold of soft_xor over values (at least one term)."""
    terms = list(values)
    if not terms:
        raise TeqError("soft_xor_fold needs at least one term")
    if len(terms) == 1:
        return _out(np.asarray(terms[0], dtype=np.float64))
    return reduce(lambda acc, v: soft_xor(acc, v, mode), terms)
