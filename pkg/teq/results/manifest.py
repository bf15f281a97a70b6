import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

import yaml
from pydantic import BaseModel

from teq import __version__
from teq.sim.schemas import SimConfig


class RunManifest(BaseModel):
    run_id: str
    version: str
    seed: int
    timestamp: str
    snr_definition: str = "Eb/N0 in dB, Es/N0 = Eb/N0 * 2 * info_bits / (2 * symbols)"
    config: SimConfig
    outputs: dict[str, str]


def run_id_for(config: SimConfig) -> str:
    """Stable id derived from the resolved configuration and the artifact version."""
    canonical = json.dumps(
        {"version": __version__, "config": config.model_dump(mode="json")},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def build_manifest(config: SimConfig, csv_path: Path, manifest_path: Path) -> RunManifest:
    return RunManifest(
        run_id=run_id_for(config),
        version=__version__,
        seed=config.seed,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        config=config,
        outputs={"csv": str(csv_path), "manifest": str(manifest_path)},
    )


def write_manifest(manifest: RunManifest, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = manifest.model_dump(mode="json")
    path.write_text(yaml.safe_dump(doc, sort_keys=False), encoding="utf-8")
    return path
