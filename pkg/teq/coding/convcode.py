"""
Feedforward convolutional codes: spec, trellis, hard encoder and the
soft-convolution (SBVP) encoder over LLRs.

Output order is generator-major per time step: (g0, g1, ..., g0, g1, ...).
Generator taps are delay sets; octal strings map with the leftmost bit as D^0,
e.g. K=5, "23" = 10011 -> {0, 3, 4}.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from teq.core.errors import ConfigError, EmptyInputError
from teq.core.llr import LLR_MAX, SoftXor, as_llrs, soft_xor_exact

MIN_CONSTRAINT_LENGTH = 2
MAX_CONSTRAINT_LENGTH = 10


def octal_taps(constraint_length: int, text: str) -> tuple[int, ...]:
    """Octal generator -> delay set, leftmost of the K bits being D^0."""
    try:
        value = int(str(text), 8)
    except ValueError as e:
        raise ConfigError(f"generator {text!r} is not an octal number") from e
    bits = format(value, "b").zfill(constraint_length)
    if len(bits) > constraint_length or value == 0:
        raise ConfigError(f"generator {text!r} does not fit K={constraint_length}")
    return tuple(i for i, ch in enumerate(bits) if ch == "1")


class CodeSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    constraint_length: int = Field(5, ge=MIN_CONSTRAINT_LENGTH)
    generators: tuple[tuple[int, ...], ...] = ((0, 3, 4), (0, 1, 3, 4))

    @model_validator(mode="before")
    @classmethod
    def _accept_octal(cls, data):
        # Config files give generators as octal strings
        if isinstance(data, dict):
            gens = data.get("generators")
            if gens and all(isinstance(g, (str, int)) for g in gens):
                k = int(data.get("constraint_length", 5))
                data = {**data, "generators": tuple(octal_taps(k, g) for g in gens)}
        return data

    @field_validator("generators")
    @classmethod
    def _normalize_taps(cls, gens: tuple[tuple[int, ...], ...]):
        if not gens:
            raise ValueError("at least one generator is required")
        normalized = []
        for taps in gens:
            if not taps:
                raise ValueError("a generator needs at least one tap")
            normalized.append(tuple(sorted(set(taps))))
        return tuple(normalized)

    @model_validator(mode="after")
    def _taps_within_register(self):
        k = self.constraint_length
        for taps in self.generators:
            bad = [d for d in taps if not 0 <= d <= k - 1]
            if bad:
                raise ValueError(f"tap delays {bad} outside 0..{k - 1} for K={k}")
        return self

    @classmethod
    def from_octal(cls, constraint_length: int, octal: Sequence[str]) -> "CodeSpec":
        return cls(constraint_length=constraint_length, generators=tuple(str(g) for g in octal))

    def to_octal(self) -> list[str]:
        out = []
        for taps in self.generators:
            bits = "".join("1" if d in taps else "0" for d in range(self.constraint_length))
            out.append(format(int(bits, 2), "o"))
        return out

    @property
    def memory(self) -> int:
        return self.constraint_length - 1

    @property
    def rate_inverse(self) -> int:
        return len(self.generators)

    @property
    def masks(self) -> tuple[int, ...]:
        """Register masks: bit d set when x(n-d) is tapped."""
        return tuple(sum(1 << d for d in taps) for taps in self.generators)


@dataclass(frozen=True, eq=False)
class Trellis:
    """
    State s holds the previous K-1 inputs, bit (d-1) = x(n-d).
    Register contents for input u are u | s << 1.
    """

    code: CodeSpec
    num_states: int
    next_state: np.ndarray  # (S, 2) int
    outputs: np.ndarray  # (S, 2, n) uint8

    # Flat edge view used by the decoder, edge e = 2*s + u
    from_state: np.ndarray
    to_state: np.ndarray
    edge_input: np.ndarray
    edge_output: np.ndarray  # (E, n)
    incoming: np.ndarray  # (S, 2) edge ids ending in each state
    outgoing: np.ndarray  # (S, 2) edge ids leaving each state

    @property
    def num_edges(self) -> int:
        return 2 * self.num_states

    def walk(self, bits: Sequence[int], state: int = 0) -> tuple[np.ndarray, int]:
        """Drive the state machine; returns (interleaved coded bits, final state)."""
        out = np.empty((len(bits), self.outputs.shape[2]), dtype=np.uint8)
        for t, u in enumerate(bits):
            out[t] = self.outputs[state, int(u)]
            state = int(self.next_state[state, int(u)])
        return out.ravel(), state


@lru_cache(maxsize=32)
def build_trellis(code: CodeSpec) -> Trellis:
    k = code.constraint_length
    if not MIN_CONSTRAINT_LENGTH <= k <= MAX_CONSTRAINT_LENGTH:
        raise ConfigError(
            f"constraint length K={k} outside supported range "
            f"{MIN_CONSTRAINT_LENGTH}..{MAX_CONSTRAINT_LENGTH}"
        )
    num_states = 1 << (k - 1)
    masks = code.masks
    state_mask = num_states - 1

    next_state = np.empty((num_states, 2), dtype=np.int64)
    outputs = np.empty((num_states, 2, len(masks)), dtype=np.uint8)
    for s in range(num_states):
        for u in (0, 1):
            reg = u | (s << 1)
            next_state[s, u] = reg & state_mask
            outputs[s, u] = [bin(reg & m).count("1") & 1 for m in masks]

    from_state = np.repeat(np.arange(num_states), 2)
    edge_input = np.tile(np.array([0, 1]), num_states)
    to_state = next_state.ravel()
    edge_output = outputs.reshape(2 * num_states, len(masks))

    order = np.argsort(to_state, kind="stable")
    incoming = order.reshape(num_states, 2)
    outgoing = np.arange(2 * num_states).reshape(num_states, 2)

    return Trellis(
        code=code,
        num_states=num_states,
        next_state=next_state,
        outputs=outputs,
        from_state=from_state,
        to_state=to_state,
        edge_input=edge_input,
        edge_output=edge_output,
        incoming=incoming,
        outgoing=outgoing,
    )


def encode(info: Sequence[int], code: CodeSpec, terminate: bool = True) -> np.ndarray:
    """Hard encoder from the all-zero state; appends K-1 zeros when terminating."""
    bits = np.asarray(info, dtype=np.uint8).ravel()
    if bits.size == 0:
        raise EmptyInputError("cannot encode an empty bit sequence")
    if terminate:
        bits = np.concatenate([bits, np.zeros(code.memory, dtype=np.uint8)])

    streams = []
    for taps in code.generators:
        poly = np.zeros(code.constraint_length, dtype=np.int64)
        poly[list(taps)] = 1
        streams.append(np.convolve(bits.astype(np.int64), poly)[: bits.size] & 1)
    return np.stack(streams, axis=1).ravel().astype(np.uint8)


def soft_encode(info_llrs: Sequence[float], code: CodeSpec, mode: SoftXor = "approx") -> np.ndarray:
    """
    Soft-convolution encoder: y_g(n) = soft-XOR over taps d of x(n-d).
    Positions before time 0 are a certain zero (+LLR_MAX).
    """
    x = as_llrs(info_llrs).ravel()
    if x.size == 0:
        raise EmptyInputError("cannot soft-encode an empty LLR sequence")
    n = x.size
    padded = np.concatenate([np.full(code.memory, LLR_MAX), x])

    streams = []
    for taps in code.generators:
        # row j holds x(n - taps[j]) for n = 0..N-1
        window = np.stack([padded[code.memory - d : code.memory - d + n] for d in taps])
        if mode == "exact":
            y = window[0]
            for row in window[1:]:
                y = soft_xor_exact(y, row)
        else:
            signs = np.prod(np.where(window < 0, -1.0, 1.0), axis=0)
            y = signs * np.min(np.abs(window), axis=0)
        streams.append(np.asarray(y, dtype=np.float64))
    return np.stack(streams, axis=1).ravel()
