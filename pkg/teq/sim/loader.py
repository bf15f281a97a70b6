"""
Sweep configuration files.

TOML layout (every key optional, defaults from SimConfig):

    [code]
    constraint_length = 5
    generators = ["23", "33"]     # octal, leftmost bit = D^0

    [channel]
    label = "c"                   # none | a | b | c

    [frame]
    info_bits = 252
    tail = 4
    puncture = "1110"             # 0/1 string or "none"
    interleaver = "16x24"         # RxC

    [run]
    algorithms = ["cod-map", "map-sbvp"]
    iterations = 4
    ebn0_db = [2.0, 4.0, 6.0]
    min_bit_errors = 100
    max_frames = 2000
    seed = 1
    decoder = "log-map"           # or "max-log"
    soft_xor = "approx"           # or "exact"
    sbvp_subtract_input = false

A run manifest (YAML with a `config` mapping) is accepted as well.
"""
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml
from pydantic import ValidationError

from teq.coding.convcode import CodeSpec
from teq.core.errors import ConfigError
from teq.sim.schemas import FrameConfig, SimConfig

LIST_KEYS = {"ebn0_db", "algorithms", "generators"}


def _from_sections(doc: Mapping[str, Any]) -> dict:
    data: dict[str, Any] = {}
    for key, value in doc.items():
        if key in ("code", "frame"):
            data[key] = dict(value)
        elif key == "channel":
            if isinstance(value, Mapping):
                unknown = sorted(set(value) - {"label"})
                if unknown:
                    raise ConfigError(f"unknown configuration key 'channel.{unknown[0]}'")
                value = value.get("label")
            data["channel"] = value
        elif key == "run":
            data.update(value)
        else:
            data[key] = value
    return data


def parse_value(raw: str) -> Any:
    """Override values use TOML literal syntax; bare words stay strings, commas split lists."""
    try:
        return tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        if "," in raw:
            return [parse_value(part.strip()) for part in raw.split(",") if part.strip()]
        return raw


def apply_override(data: dict, key: str, raw: str) -> None:
    value = parse_value(raw)
    parts = key.replace("-", "_").split(".")
    if parts[0] == "run":
        parts = parts[1:]
    if parts and parts[-1] in LIST_KEYS and not isinstance(value, list):
        value = [value]

    if parts in (["channel", "label"], ["label"]):
        data["channel"] = str(value)
    elif len(parts) == 2 and parts[0] in ("code", "frame"):
        data.setdefault(parts[0], {})[parts[1]] = value
    elif len(parts) == 1 and parts[0] in SimConfig.model_fields and parts[0] not in ("code", "frame"):
        data[parts[0]] = value
    elif len(parts) == 1 and parts[0] in FrameConfig.model_fields:
        data.setdefault("frame", {})[parts[0]] = value
    elif len(parts) == 1 and parts[0] in CodeSpec.model_fields:
        data.setdefault("code", {})[parts[0]] = value
    else:
        raise ConfigError(f"unknown configuration key {key!r}")


def _describe(err: ValidationError) -> str:
    lines = []
    for item in err.errors():
        loc = ".".join(str(p) for p in item["loc"]) or "config"
        lines.append(f"{loc}: {item['msg']}")
    return "; ".join(lines)


def build_config(data: Mapping[str, Any], overrides: Optional[Mapping[str, str]] = None) -> SimConfig:
    merged = {k: (dict(v) if isinstance(v, Mapping) else v) for k, v in data.items()}
    for key, raw in (overrides or {}).items():
        apply_override(merged, key, raw)
    try:
        return SimConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigError(_describe(e)) from e


def load_config(path: Path, overrides: Optional[Mapping[str, str]] = None) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e

    try:
        if path.suffix in (".yaml", ".yml"):
            doc = yaml.safe_load(text) or {}
            data = dict(doc.get("config", doc))
        else:
            data = _from_sections(tomllib.loads(text))
    except (tomllib.TOMLDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from e
    return build_config(data, overrides)
