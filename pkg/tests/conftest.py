import itertools
import os
import sys

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings
from scipy.special import logsumexp

# --- Ensure repo root is on sys.path so "teq" imports work ---
REPO_ROOT = os.path.dirname(os.path.dirname(__file__))  # go up from tests/ to repo root
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)

from teq.coding.convcode import CodeSpec, build_trellis, encode  # noqa: E402
from teq.core.llr import LLR_MAX  # noqa: E402
from teq.sim.schemas import FrameConfig, SimConfig  # noqa: E402

hypothesis_settings.register_profile("teq", max_examples=200, deadline=None)
hypothesis_settings.load_profile("teq")

# Worked soft-convolution example: y(5) on the 1 + D^3 + D^4 stream
WORKED_X = [-43.2565, -166.5584, 12.5332, 28.7676, -114.6471, 119.0915]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def code():
    return CodeSpec()


@pytest.fixture
def trellis(code):
    return build_trellis(code)


@pytest.fixture
def small_frame():
    # 60 info + 4 tail -> 128 coded -> 1110 -> 96 -> 8x12 -> 48 symbols
    return FrameConfig(info_bits=60, tail=4, puncture="1110", interleaver="8x12")


@pytest.fixture
def small_config(small_frame):
    def make(**overrides):
        fields = dict(
            frame=small_frame,
            channel="c",
            iterations=3,
            ebn0_db=(4.0,),
            min_bit_errors=20,
            max_frames=6,
            seed=11,
        )
        fields.update(overrides)
        return SimConfig(**fields)

    return make


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "quick.toml"
    path.write_text(
        """
[channel]
label = "b"

[frame]
info_bits = 60
tail = 4
puncture = "1110"
interleaver = "8x12"

[run]
iterations = 2
ebn0_db = [3.0, 6.0]
min_bit_errors = 10
max_frames = 4
seed = 5
""",
        encoding="utf-8",
    )
    return path


def brute_force_map(coded_llrs, code, n_info, combine):
    """Info and coded APPs by enumerating every terminated codeword."""
    messages = np.array(list(itertools.product([0, 1], repeat=n_info)), dtype=np.uint8)
    words = np.array([encode(m, code) for m in messages])
    padded = np.hstack([messages, np.zeros((len(messages), code.memory), dtype=np.uint8)])
    metric = 0.5 * (1.0 - 2.0 * words) @ coded_llrs

    def app(bits):
        out = np.empty(bits.shape[1])
        for i in range(bits.shape[1]):
            zero = bits[:, i] == 0
            with np.errstate(divide="ignore"):
                out[i] = combine(metric[zero]) - combine(metric[~zero])
        return np.clip(out, -LLR_MAX, LLR_MAX)

    return app(padded), app(words)


def logsum_combine(values):
    return logsumexp(values) if values.size else -np.inf


def max_combine(values):
    return values.max() if values.size else -np.inf
