import logging
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from teq.core.config import settings
from teq.core.errors import ConfigError, TeqError
from teq.core.log import console as err_console
from teq.results.manifest import RunManifest, build_manifest, write_manifest
from teq.results.store import write_csv
from teq.sim.engine import run_sweep
from teq.sim.loader import load_config
from teq.sim.schemas import BerRecord, SimConfig

logger = logging.getLogger(__name__)

CSV_NAME = "results.csv"
MANIFEST_NAME = "manifest.yaml"


def write_run(config: SimConfig, records: list[BerRecord], output_dir: Path) -> RunManifest:
    """results.csv plus manifest.yaml under output_dir."""
    csv_path = output_dir / CSV_NAME
    manifest_path = output_dir / MANIFEST_NAME
    manifest = build_manifest(config, csv_path, manifest_path)
    write_csv(csv_path, manifest.run_id, records)
    write_manifest(manifest, manifest_path)
    return manifest


def parse_extra_overrides(args: list[str]) -> dict[str, str]:
    """`--key=value` / `--section.key=value` flags left over by the option parser."""
    overrides: dict[str, str] = {}
    for arg in args:
        if not arg.startswith("--") or "=" not in arg:
            raise ConfigError(f"unexpected argument {arg!r}; overrides look like --key=value")
        key, value = arg[2:].split("=", 1)
        overrides[key] = value
    return overrides


def cmd_sweep(
    ctx: typer.Context,
    config_path: Path = typer.Option(..., "-c", "--config", help="TOML sweep config (or a run manifest)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed, overrides the config"),
    threads: int = typer.Option(settings.threads, "--threads", min=1, help="Worker processes"),
    output_dir: Path = typer.Option(Path(settings.output_dir), "-o", "--output", help="Output directory"),
):
    """
    Run the BER sweep for every algorithm in the config and write
    results.csv plus manifest.yaml. Extra --key=value flags override the file.
    """
    try:
        overrides = parse_extra_overrides(list(ctx.args))
        if seed is not None:
            overrides["seed"] = str(seed)
        config = load_config(config_path, overrides)
        logger.info("sweep channel=%s algorithms=%s ebn0=%s", config.channel, list(config.algorithms), list(config.ebn0_db))
        records = run_sweep(config, threads=threads)
    except TeqError as e:
        err_console.print(f"[bold red]error:[/bold red] {escape(str(e))}", soft_wrap=True)
        raise typer.Exit(code=1)

    manifest = write_run(config, records, output_dir)

    table = Table(title=f"run {manifest.run_id} (channel {config.channel})")
    for col in ("algorithm", "Eb/N0 dB", "iter", "frames", "errors", "BER"):
        table.add_column(col)
    for rec in records:
        table.add_row(rec.algorithm, f"{rec.ebn0_db:g}", str(rec.iteration), str(rec.frames), str(rec.bit_errors), f"{rec.ber:.3e}")
    Console().print(table)
    logger.info("wrote %s and %s", manifest.outputs["csv"], manifest.outputs["manifest"])
