"""Static FIR ISI channels, AWGN and the test-channel registry."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from importlib.resources import files
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from teq.core.config import settings
from teq.core.errors import ConfigError, EmptyInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChannelModel:
    taps: np.ndarray
    label: str
    provenance: str = ""

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.complex128).ravel()
        if taps.size == 0:
            raise EmptyInputError(f"channel {self.label!r} has no taps")
        if not np.isfinite(taps).all():
            raise ConfigError(f"channel {self.label!r} has non-finite taps")
        object.__setattr__(self, "taps", taps)

    @property
    def length(self) -> int:
        return self.taps.size

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.taps) ** 2))


class NoiseSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    # Total complex noise variance per sample; sigma2/2 per real dimension
    sigma2: float = Field(..., ge=0.0)


def apply_channel(symbols, channel: ChannelModel) -> np.ndarray:
    """Full linear convolution, output length N + T - 1."""
    x = np.asarray(symbols, dtype=np.complex128).ravel()
    if x.size == 0:
        raise EmptyInputError("no symbols to send through the channel")
    return np.convolve(x, channel.taps)


def add_awgn(samples, noise: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    y = np.asarray(samples, dtype=np.complex128).ravel()
    if noise.sigma2 == 0.0:
        return y.copy()
    scale = np.sqrt(noise.sigma2 / 2.0)
    w = rng.standard_normal(y.size) + 1j * rng.standard_normal(y.size)
    return y + scale * w


def _parse_tap(token: str) -> complex:
    if "," in token:
        re_part, im_part = token.split(",", 1)
        return complex(float(re_part), float(im_part))
    return complex(float(token))


def parse_channel_file(text: str) -> dict[str, ChannelModel]:
    channels: dict[str, ChannelModel] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 3 or not fields[0] or not fields[2]:
            raise ConfigError(f"channel file line {line_no}: expected 'label | taps | provenance'")
        label, tap_text, provenance = fields
        try:
            taps = np.array([_parse_tap(tok) for tok in tap_text.split()], dtype=np.complex128)
        except ValueError as e:
            raise ConfigError(f"channel file line {line_no}: bad tap value ({e})") from e
        if taps.size == 0:
            raise ConfigError(f"channel file line {line_no}: channel {label!r} has no taps")
        energy = float(np.sum(np.abs(taps) ** 2))
        if energy == 0.0:
            raise ConfigError(f"channel file line {line_no}: channel {label!r} has zero energy")
        channels[label] = ChannelModel(taps=taps / np.sqrt(energy), label=label, provenance=provenance)
    return channels


@lru_cache(maxsize=4)
def _load_channels(path: Optional[str]) -> dict[str, ChannelModel]:
    if path:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = files("teq").joinpath("data/channels.txt").read_text(encoding="utf-8")
    channels = parse_channel_file(text)
    logger.debug("loaded channels %s", sorted(channels))
    return channels


def channel_labels() -> list[str]:
    return sorted(_load_channels(settings.channel_file))


def channel_registry(label: str) -> ChannelModel:
    channels = _load_channels(settings.channel_file)
    try:
        return channels[label]
    except KeyError:
        raise ConfigError(
            f"unknown channel label {label!r} (known: {', '.join(sorted(channels))})"
        ) from None
