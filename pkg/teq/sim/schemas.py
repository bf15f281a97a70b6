from typing import Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_serializer,
    field_validator,
    model_validator,
)

from teq.channel.isi import channel_registry
from teq.coding.convcode import CodeSpec
from teq.coding.mapdec import DecoderAlgo
from teq.coding.permute import InterleaverSpec, PunctureSpec
from teq.core.llr import SoftXor

Algorithm = Literal["cod-map", "map-sbvp"]


# ---------------------------------------------------------------------------
# FRAME
# ---------------------------------------------------------------------------

class FrameConfig(BaseModel):
    """
    Frame arithmetic: rate_inverse * (info_bits + tail) coded bits, punctured
    to rows * cols (even), giving punctured / 2 QPSK symbols.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    info_bits: int = Field(252, gt=0)
    tail: int = Field(4, ge=0)
    rate_inverse: int = Field(2, gt=0)
    puncture: PunctureSpec = PunctureSpec()
    interleaver: InterleaverSpec = InterleaverSpec(rows=16, cols=24)

    @field_validator("puncture", mode="before")
    @classmethod
    def _parse_puncture(cls, value):
        # TOML reads an unquoted 1110 as an integer
        if isinstance(value, (str, int)):
            return PunctureSpec.parse(str(value))
        return value

    @field_validator("interleaver", mode="before")
    @classmethod
    def _parse_interleaver(cls, value):
        return InterleaverSpec.parse(value) if isinstance(value, str) else value

    @model_validator(mode="after")
    def _frame_arithmetic(self):
        coded = self.coded_bits
        kept = self.punctured_bits
        if kept != self.interleaver.size:
            raise ValueError(
                f"frame arithmetic: {coded} coded bits punctured with {self.puncture} leave {kept}, "
                f"but interleaver {self.interleaver} holds {self.interleaver.size}"
            )
        if kept % 2:
            raise ValueError(f"frame arithmetic: {kept} punctured bits do not fill whole QPSK symbols")
        return self

    @field_serializer("puncture")
    def _dump_puncture(self, value: PunctureSpec) -> str:
        return str(value)

    @field_serializer("interleaver")
    def _dump_interleaver(self, value: InterleaverSpec) -> str:
        return str(value)

    @property
    def coded_bits(self) -> int:
        return self.rate_inverse * (self.info_bits + self.tail)

    @property
    def punctured_bits(self) -> int:
        return self.puncture.kept(self.coded_bits)

    @property
    def n_symbols(self) -> int:
        return self.punctured_bits // 2

    @property
    def effective_rate(self) -> float:
        """Info bits per transmitted coded bit."""
        return self.info_bits / (2 * self.n_symbols)


# ---------------------------------------------------------------------------
# SWEEP
# ---------------------------------------------------------------------------

class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    code: CodeSpec = CodeSpec()
    channel: str = "c"
    algorithms: tuple[Algorithm, ...] = ("cod-map", "map-sbvp")
    iterations: int = Field(4, ge=1)
    frame: FrameConfig = FrameConfig()
    ebn0_db: tuple[float, ...] = ()

    # Stop rule per point
    min_bit_errors: int = Field(100, ge=1)
    max_frames: int = Field(2000, ge=1)

    seed: int = Field(0, ge=0)
    decoder: DecoderAlgo = "log-map"
    soft_xor: SoftXor = "approx"
    sbvp_subtract_input: bool = False

    @field_validator("channel")
    @classmethod
    def _known_channel(cls, label: str):
        channel_registry(label)
        return label

    @field_validator("algorithms")
    @classmethod
    def _unique_algorithms(cls, algos: tuple[str, ...]):
        if not algos:
            raise ValueError("at least one algorithm is required")
        if len(set(algos)) != len(algos):
            raise ValueError(f"duplicate algorithms in {list(algos)}")
        return algos

    @model_validator(mode="after")
    def _frame_matches_code(self):
        if self.frame.tail != self.code.memory:
            raise ValueError(
                f"frame arithmetic: tail of {self.frame.tail} bits, but K={self.code.constraint_length} "
                f"terminates with {self.code.memory}"
            )
        if self.frame.rate_inverse != self.code.rate_inverse:
            raise ValueError(
                f"frame arithmetic: frame assumes rate 1/{self.frame.rate_inverse}, "
                f"code has {self.code.rate_inverse} generators"
            )
        return self

    @field_serializer("code")
    def _dump_code(self, code: CodeSpec) -> dict:
        return {"constraint_length": code.constraint_length, "generators": code.to_octal()}


# ---------------------------------------------------------------------------
# RESULTS
# ---------------------------------------------------------------------------

class BerRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    channel: str
    algorithm: Algorithm
    ebn0_db: float
    iteration: int
    frames: int
    info_bits_counted: int
    bit_errors: int

    @computed_field
    @property
    def ber(self) -> float:
        if self.info_bits_counted == 0:
            return 0.0
        return self.bit_errors / self.info_bits_counted

    def sort_key(self) -> tuple:
        return (self.channel, self.algorithm, self.ebn0_db, self.iteration)
