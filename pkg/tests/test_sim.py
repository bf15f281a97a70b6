import math

import numpy as np
import pytest
from pydantic import ValidationError

from teq.core.errors import ConfigError
from teq.sim.calibrate import calibrate_uncoded, uncoded_qpsk_ber
from teq.sim.engine import ebn0_to_sigma2, frame_rng, run_frame, run_sweep
from teq.sim.loader import apply_override, load_config, parse_value
from teq.sim.schemas import BerRecord, FrameConfig, SimConfig

HALF_RATE = FrameConfig(info_bits=256, tail=0, puncture="none", interleaver="16x32")


def test_default_frame_arithmetic():
    frame = FrameConfig()
    assert frame.coded_bits == 512
    assert frame.punctured_bits == 384
    assert frame.n_symbols == 192
    assert frame.effective_rate == pytest.approx(0.65625)


def test_frame_arithmetic_is_enforced():
    with pytest.raises(ValidationError, match="frame arithmetic"):
        FrameConfig(info_bits=252, tail=4, puncture="1110", interleaver="16x16")
    with pytest.raises(ValidationError, match="frame arithmetic"):
        FrameConfig(info_bits=1, tail=4, puncture="1110", interleaver="1x7")


def test_sim_config_checks_tail_against_code():
    with pytest.raises(ValidationError, match="tail"):
        SimConfig(frame=FrameConfig(info_bits=254, tail=2, puncture="1110", interleaver="16x24"))


def test_unknown_channel_rejected():
    with pytest.raises(ValidationError, match="'d'"):
        SimConfig(channel="d")


def test_duplicate_algorithms_rejected():
    with pytest.raises(ValidationError):
        SimConfig(algorithms=("cod-map", "cod-map"))


@pytest.mark.parametrize("ebn0_db, sigma2", [(0.0, 1.0), (10 * math.log10(2.0), 0.5)])
def test_ebn0_to_sigma2_at_half_rate(ebn0_db, sigma2):
    assert HALF_RATE.effective_rate == pytest.approx(0.5)
    assert ebn0_to_sigma2(ebn0_db, HALF_RATE) == pytest.approx(sigma2, rel=1e-12)


def test_ebn0_to_sigma2_noise_free():
    assert ebn0_to_sigma2(math.inf, HALF_RATE) == 0.0


def test_frame_streams_are_independent_of_call_order():
    a = frame_rng(3, 10).integers(0, 2**32, size=4)
    frame_rng(3, 11).integers(0, 2**32, size=4)
    b = frame_rng(3, 10).integers(0, 2**32, size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, frame_rng(3, 11).integers(0, 2**32, size=4))


@pytest.mark.parametrize("algorithm", ["cod-map", "map-sbvp"])
def test_high_snr_without_isi_is_error_free(small_config, algorithm):
    config = small_config(channel="none", iterations=4)
    assert run_frame(config, 40.0, 0, algorithm) == [0, 0, 0, 0]


def test_noise_free_run(small_config):
    config = small_config(channel="none", iterations=2)
    assert run_frame(config, math.inf, 1, "cod-map") == [0, 0]


def test_run_frame_is_deterministic(small_config):
    config = small_config()
    first = run_frame(config, 2.0, 5, "map-sbvp")
    assert run_frame(config, 2.0, 5, "map-sbvp") == first
    assert len(first) == config.iterations
    assert all(0 <= e <= config.frame.info_bits for e in first)


def test_iteration_one_is_shared_by_both_algorithms(small_config):
    config = small_config()
    for idx in range(3):
        cod = run_frame(config, 3.0, idx, "cod-map")
        sbvp = run_frame(config, 3.0, idx, "map-sbvp")
        assert cod[0] == sbvp[0]


def test_sbvp_variants_run(small_config):
    config = small_config(soft_xor="exact", sbvp_subtract_input=True, decoder="max-log")
    errors = run_frame(config, 6.0, 0, "map-sbvp")
    assert len(errors) == config.iterations


def test_empty_sweep(small_config):
    assert run_sweep(small_config(ebn0_db=())) == []


def test_sweep_records(small_config):
    config = small_config(ebn0_db=(6.0, 2.0), max_frames=3)
    records = run_sweep(config)
    assert len(records) == 2 * 2 * config.iterations
    assert records == sorted(records, key=BerRecord.sort_key)
    for rec in records:
        assert rec.info_bits_counted == rec.frames * config.frame.info_bits
        assert 0.0 <= rec.ber <= 1.0
        assert 1 <= rec.frames <= config.max_frames


def test_sweep_stops_once_every_iteration_has_enough_errors(small_config):
    config = small_config(channel="c", ebn0_db=(-4.0,), min_bit_errors=5, max_frames=200, algorithms=("cod-map",))
    records = run_sweep(config, batch_frames=4)
    frames = {r.frames for r in records}
    assert len(frames) == 1 and frames.pop() < 200
    assert min(r.bit_errors for r in records) >= 5


def test_sweep_does_not_depend_on_batching_or_workers(small_config):
    config = small_config(ebn0_db=(1.0,), min_bit_errors=15, max_frames=12)
    serial = run_sweep(config, threads=1, batch_frames=1)
    assert run_sweep(config, threads=1, batch_frames=5) == serial
    assert run_sweep(config, threads=2, batch_frames=3) == serial


def test_uncoded_theory():
    assert uncoded_qpsk_ber(0.0) == pytest.approx(0.0786, abs=1e-4)
    assert uncoded_qpsk_ber(4.0) == pytest.approx(0.0125, abs=1e-4)
    assert uncoded_qpsk_ber(math.inf) == 0.0


def test_calibration_within_three_sigma():
    point = calibrate_uncoded(2.0, 400_000, seed=9)
    assert point.bits == 400_000
    assert point.deviation_sigmas < 3.0


def test_calibration_noise_free_and_minimum():
    assert calibrate_uncoded(math.inf, 100_000, seed=1).bit_errors == 0
    with pytest.raises(ConfigError):
        calibrate_uncoded(0.0, 99_999, seed=1)


def test_parse_value():
    assert parse_value("4") == 4
    assert parse_value("2.5") == 2.5
    assert parse_value("true") is True
    assert parse_value("0,2,4") == [0, 2, 4]
    assert parse_value("map-sbvp") == "map-sbvp"
    assert parse_value("0110") == "0110"


def test_overrides_route_to_sections():
    data: dict = {}
    apply_override(data, "ebn0_db", "3")
    apply_override(data, "frame.info_bits", "60")
    apply_override(data, "interleaver", "8x12")
    apply_override(data, "channel.label", "b")
    apply_override(data, "run.iterations", "2")
    apply_override(data, "constraint_length", "5")
    assert data == {
        "ebn0_db": [3],
        "frame": {"info_bits": 60, "interleaver": "8x12"},
        "channel": "b",
        "iterations": 2,
        "code": {"constraint_length": 5},
    }
    with pytest.raises(ConfigError):
        apply_override(data, "colour", "red")


def test_load_config_toml_with_overrides(config_file):
    config = load_config(config_file, {"seed": "9", "algorithms": "map-sbvp"})
    assert config.channel == "b"
    assert config.seed == 9
    assert config.algorithms == ("map-sbvp",)
    assert config.frame.n_symbols == 48
    assert config.ebn0_db == (3.0, 6.0)


def test_load_config_errors(tmp_path, config_file):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.toml")
    with pytest.raises(ConfigError, match="'d'"):
        load_config(config_file, {"channel": "d"})
    with pytest.raises(ConfigError, match="frame arithmetic"):
        load_config(config_file, {"interleaver": "8x8"})
    with pytest.raises(ConfigError):
        load_config(config_file, {"puncture": "11x0"})


@pytest.mark.parametrize(
    "section, line, key",
    [
        ("run", "iteratons = 8", "iteratons"),
        ("run", "max_frame = 5", "max_frame"),
        ("frame", "info_bit = 60", "info_bit"),
        ("code", "generator = [\"23\", \"33\"]", "generator"),
        ("channel", "lable = \"a\"", "lable"),
    ],
)
def test_misspelled_config_keys_are_rejected(tmp_path, section, line, key):
    path = tmp_path / "typo.toml"
    path.write_text(f"[{section}]\n{line}\n", encoding="utf-8")
    with pytest.raises(ConfigError, match=key):
        load_config(path)


def test_misspelled_key_reports_extra_input(tmp_path):
    path = tmp_path / "typo.toml"
    path.write_text("[run]\niteratons = 8\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="Extra inputs are not permitted"):
        load_config(path)


def test_misspelled_key_in_yaml_config(tmp_path):
    path = tmp_path / "manifest.yaml"
    path.write_text("config:\n  channel: b\n  sead: 4\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="sead"):
        load_config(path)
