"""Uncoded QPSK over AWGN: anchors the whole Eb/N0 -> sigma2 chain to Q(sqrt(2 Eb/N0))."""
import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import erfc

from teq.channel.isi import NoiseSpec, add_awgn, apply_channel, channel_registry
from teq.channel.modem import qpsk_demap_hard, qpsk_modulate
from teq.core.errors import ConfigError

MIN_CALIBRATION_BITS = 100_000

# Frame index reserved for calibration streams so they never alias sweep frames
CALIBRATION_STREAM = 2**63 - 1


class CalibrationPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    ebn0_db: float
    bits: int
    bit_errors: int
    ber: float
    theory: float
    mc_sigma: float

    @property
    def deviation_sigmas(self) -> float:
        if self.mc_sigma == 0.0:
            return 0.0 if self.ber == self.theory else math.inf
        return abs(self.ber - self.theory) / self.mc_sigma


def qfunc(x):
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


def uncoded_qpsk_ber(ebn0_db: float) -> float:
    if math.isinf(ebn0_db) and ebn0_db > 0:
        return 0.0
    return float(qfunc(math.sqrt(2.0 * 10.0 ** (ebn0_db / 10.0))))


def calibrate_uncoded(ebn0_db: float, bits: int, seed: int) -> CalibrationPoint:
    if bits < MIN_CALIBRATION_BITS:
        raise ConfigError(f"calibration needs at least {MIN_CALIBRATION_BITS} bits, got {bits}")
    bits += bits % 2
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, CALIBRATION_STREAM])))

    tx = rng.integers(0, 2, size=bits, dtype=np.uint8)
    # Two bits per unit-energy symbol: Es/N0 = 2 Eb/N0
    sigma2 = 0.0 if math.isinf(ebn0_db) else 1.0 / (2.0 * 10.0 ** (ebn0_db / 10.0))
    rx = add_awgn(apply_channel(qpsk_modulate(tx), channel_registry("none")), NoiseSpec(sigma2=sigma2), rng)
    errors = int(np.count_nonzero(qpsk_demap_hard(rx) != tx))

    theory = uncoded_qpsk_ber(ebn0_db)
    return CalibrationPoint(
        ebn0_db=ebn0_db,
        bits=bits,
        bit_errors=errors,
        ber=errors / bits,
        theory=theory,
        mc_sigma=math.sqrt(theory * (1.0 - theory) / bits),
    )
