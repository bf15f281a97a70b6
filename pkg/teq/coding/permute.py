"""Block interleaver and periodic puncturing, for bit and LLR payloads alike."""
import re

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from teq.core.errors import ConfigError, LengthMismatchError


class InterleaverSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: int = Field(..., gt=0)
    cols: int = Field(..., gt=0)

    @classmethod
    def parse(cls, text: str) -> "InterleaverSpec":
        """Accepts "RxC", e.g. "16x24"."""
        m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", str(text))
        if not m:
            raise ConfigError(f"interleaver {text!r} is not of the form RxC")
        return cls(rows=int(m.group(1)), cols=int(m.group(2)))

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def __str__(self) -> str:
        return f"{self.rows}x{self.cols}"


class PunctureSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    pattern: tuple[bool, ...] = (True, True, True, False)

    @field_validator("pattern")
    @classmethod
    def _keeps_something(cls, pattern: tuple[bool, ...]):
        if not pattern or not any(pattern):
            raise ValueError("puncture pattern must keep at least one position per period")
        return pattern

    @classmethod
    def parse(cls, text: str) -> "PunctureSpec":
        """A 0/1 string ("1110"); "none" keeps everything."""
        text = str(text).strip()
        if text.lower() == "none":
            return cls(pattern=(True,))
        if not text or set(text) - {"0", "1"}:
            raise ConfigError(f"puncture pattern {text!r} must be a 0/1 string or 'none'")
        if "1" not in text:
            raise ConfigError(f"puncture pattern {text!r} deletes every position")
        return cls(pattern=tuple(ch == "1" for ch in text))

    def __str__(self) -> str:
        if self.pattern == (True,):
            return "none"
        return "".join("1" if keep else "0" for keep in self.pattern)

    def mask(self, length: int) -> np.ndarray:
        period = np.asarray(self.pattern, dtype=bool)
        return np.resize(period, length)

    def kept(self, length: int) -> int:
        return int(self.mask(length).sum())


def interleave(seq, spec: InterleaverSpec) -> np.ndarray:
    """Write row-wise, read column-wise."""
    arr = np.asarray(seq)
    if arr.size != spec.size:
        raise LengthMismatchError(f"interleaver {spec} needs {spec.size} entries, got {arr.size}")
    return arr.reshape(spec.rows, spec.cols).T.ravel()


def deinterleave(seq, spec: InterleaverSpec) -> np.ndarray:
    arr = np.asarray(seq)
    if arr.size != spec.size:
        raise LengthMismatchError(f"interleaver {spec} needs {spec.size} entries, got {arr.size}")
    return arr.reshape(spec.cols, spec.rows).T.ravel()


def puncture(seq, spec: PunctureSpec) -> np.ndarray:
    arr = np.asarray(seq)
    return arr[spec.mask(arr.size)]


def depuncture(seq, spec: PunctureSpec, original_len: int, fill: float = 0.0) -> np.ndarray:
    """Reinsert `fill` (erasure LLR 0 by default) at the deleted positions."""
    arr = np.asarray(seq)
    mask = spec.mask(original_len)
    if int(mask.sum()) != arr.size:
        raise LengthMismatchError(
            f"pattern {spec} keeps {int(mask.sum())} of {original_len} positions, got {arr.size}"
        )
    out = np.full(original_len, fill, dtype=np.result_type(arr.dtype, np.asarray(fill).dtype))
    out[mask] = arr
    return out
