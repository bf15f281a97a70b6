"""
Turbo-equalization loop and Monte-Carlo BER sweep.

Randomness: every frame draws from its own PCG64 stream seeded with
SeedSequence([seed, frame_idx]). The algorithm tag and the Eb/N0 point are not
part of the key, so COD-MAP and MAP-SBVP see the same bits and the same
(scaled) noise, and results do not depend on execution order or worker count.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional

import numpy as np

from teq.channel.isi import NoiseSpec, add_awgn, apply_channel, channel_registry
from teq.channel.modem import qpsk_modulate
from teq.coding.convcode import build_trellis, encode
from teq.coding.mapdec import DecoderInput, bcjr, extrinsic_cod_map, extrinsic_map_sbvp
from teq.coding.permute import deinterleave, depuncture, interleave, puncture
from teq.core.llr import LLR_MAX
from teq.equalizer.mmse import EqualizerInput, equalize
from teq.sim.schemas import Algorithm, BerRecord, FrameConfig, SimConfig

logger = logging.getLogger(__name__)

DEFAULT_BATCH_FRAMES = 16


def frame_rng(seed: int, frame_idx: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, frame_idx])))


def ebn0_to_sigma2(ebn0_db: float, frame: FrameConfig) -> float:
    """Complex noise variance for unit-energy symbols; Es/N0 = Eb/N0 * 2 R_eff."""
    if np.isposinf(ebn0_db):
        return 0.0
    es_n0 = 10.0 ** (ebn0_db / 10.0) * 2.0 * frame.effective_rate
    return 1.0 / es_n0


def run_frame(config: SimConfig, ebn0_db: float, frame_idx: int, algorithm: Optional[Algorithm] = None) -> list[int]:
    """Bit errors of the hard info decisions after each turbo iteration."""
    algorithm = algorithm or config.algorithms[0]
    frame = config.frame
    code = config.code
    trellis = build_trellis(code)
    channel = channel_registry(config.channel)
    rng = frame_rng(config.seed, frame_idx)

    info = rng.integers(0, 2, size=frame.info_bits, dtype=np.uint8)
    coded = encode(info, code, terminate=True)
    tx_bits = interleave(puncture(coded, frame.puncture), frame.interleaver)
    symbols = qpsk_modulate(tx_bits)

    sigma2 = ebn0_to_sigma2(ebn0_db, frame)
    received = add_awgn(apply_channel(symbols, channel), NoiseSpec(sigma2=sigma2), rng)
    # The equalizer needs a positive variance; a noise-free run is its limit
    eq_sigma2 = max(sigma2, 1e-12)

    priors = np.zeros((frame.n_symbols, 2))
    errors: list[int] = []
    for it in range(1, config.iterations + 1):
        eq_out = equalize(EqualizerInput(received=received, channel=channel, sigma2=eq_sigma2, priors=priors))
        coded_llrs = depuncture(
            deinterleave(eq_out.extrinsic.ravel(), frame.interleaver), frame.puncture, frame.coded_bits
        )
        dec_in = DecoderInput(coded_llrs=coded_llrs)
        dec_out = bcjr(dec_in, trellis, config.decoder)
        errors.append(int(np.count_nonzero(dec_out.info_hard != info)))
        if it == config.iterations:
            break

        if algorithm == "cod-map":
            extrinsic = extrinsic_cod_map(dec_out, dec_in)
        else:
            extrinsic = extrinsic_map_sbvp(dec_out, code, mode=config.soft_xor)
            if config.sbvp_subtract_input:
                extrinsic = np.clip(extrinsic - dec_in.coded_llrs, -LLR_MAX, LLR_MAX)
        priors = interleave(puncture(extrinsic, frame.puncture), frame.interleaver).reshape(-1, 2)
    return errors


def _run_frame_task(args: tuple) -> list[int]:
    return run_frame(*args)


def _frame_batches(config: SimConfig, batch_frames: int) -> Iterable[range]:
    for start in range(0, config.max_frames, batch_frames):
        yield range(start, min(start + batch_frames, config.max_frames))


def _run_point(
    config: SimConfig,
    ebn0_db: float,
    algorithm: Algorithm,
    pool: Optional[ProcessPoolExecutor],
    batch_frames: int,
) -> list[BerRecord]:
    totals = np.zeros(config.iterations, dtype=np.int64)
    frames = 0
    done = False
    for batch in _frame_batches(config, batch_frames):
        tasks = [(config, ebn0_db, idx, algorithm) for idx in batch]
        results = pool.map(_run_frame_task, tasks) if pool else map(_run_frame_task, tasks)
        # Merge strictly in frame-index order; later frames of the batch are dropped
        for counts in results:
            if done:
                continue
            totals += np.asarray(counts, dtype=np.int64)
            frames += 1
            done = int(totals.min()) >= config.min_bit_errors
        logger.debug("%s %.2f dB: %d frames, errors %s", algorithm, ebn0_db, frames, totals.tolist())
        if done:
            break

    bits = frames * config.frame.info_bits
    logger.info(
        "%s ch=%s %.2f dB: %d frames, BER per iteration %s",
        algorithm,
        config.channel,
        ebn0_db,
        frames,
        ", ".join(f"{e / bits:.3e}" for e in totals),
    )
    return [
        BerRecord(
            channel=config.channel,
            algorithm=algorithm,
            ebn0_db=float(ebn0_db),
            iteration=it + 1,
            frames=frames,
            info_bits_counted=bits,
            bit_errors=int(totals[it]),
        )
        for it in range(config.iterations)
    ]


def run_sweep(config: SimConfig, threads: int = 1, batch_frames: int = DEFAULT_BATCH_FRAMES) -> list[BerRecord]:
    """One record per (algorithm, Eb/N0, iteration), sorted by (channel, algorithm, Eb/N0, iteration)."""
    if not config.ebn0_db:
        return []
    records: list[BerRecord] = []
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for algorithm in config.algorithms:
            for ebn0_db in config.ebn0_db:
                records.extend(_run_point(config, ebn0_db, algorithm, pool, batch_frames))
    finally:
        if pool:
            pool.shutdown()
    return sorted(records, key=BerRecord.sort_key)
