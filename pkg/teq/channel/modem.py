import numpy as np

from teq.core.errors import LengthMismatchError

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def qpsk_modulate(bits) -> np.ndarray:
    """Gray QPSK, unit energy: (b_I, b_Q) -> ((1-2b_I) + j(1-2b_Q)) / sqrt(2)."""
    b = np.asarray(bits, dtype=np.int64).ravel()
    if b.size % 2:
        raise LengthMismatchError(f"QPSK needs an even number of bits, got {b.size}")
    pairs = 1 - 2 * b.reshape(-1, 2)
    return (pairs[:, 0] + 1j * pairs[:, 1]) * INV_SQRT2


def qpsk_demap_hard(samples) -> np.ndarray:
    """Inverse of qpsk_modulate by sign; zero decides bit 0."""
    s = np.asarray(samples, dtype=np.complex128).ravel()
    bits = np.stack([s.real < 0, s.imag < 0], axis=1)
    return bits.ravel().astype(np.uint8)
