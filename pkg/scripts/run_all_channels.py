"""
Sweep every registered channel with one config and plot each result.

    python -m scripts.run_all_channels configs/default.toml --threads 8
"""
import logging
from pathlib import Path
from typing import List, Optional

import typer
from rich.markup import escape

from teq.channel.isi import channel_labels
from teq.commands.plot import write_plot
from teq.commands.sweep import write_run
from teq.core.config import settings
from teq.core.errors import TeqError
from teq.core.log import configure_logging, console as err_console
from teq.sim.engine import run_sweep
from teq.sim.loader import load_config

logger = logging.getLogger("run_all_channels")

app = typer.Typer(add_completion=False)


def run_all_channels(config_path: Path, threads: int, out_root: Path, labels: Optional[List[str]] = None) -> list[Path]:
    """One results directory per channel: results.csv, manifest.yaml, ber.svg."""
    written = []
    for label in labels or channel_labels():
        config = load_config(config_path, {"channel": label})
        out_dir = out_root / f"channel_{label}"
        records = run_sweep(config, threads=threads)
        write_run(config, records, out_dir)
        write_plot(records, out_dir / "ber.svg", title=f"Channel {label}: BER vs Eb/N0")
        logger.info("channel %s done -> %s", label, out_dir)
        written.append(out_dir)
    return written


@app.command()
def main(
    config_path: Path = typer.Argument(Path("configs/default.toml"), help="Sweep config applied to every channel"),
    threads: int = typer.Option(settings.threads, "--threads", min=1, help="Worker processes"),
    output_dir: Path = typer.Option(Path(settings.output_dir), "-o", "--output", help="Root output directory"),
    channel: Optional[List[str]] = typer.Option(None, "--channel", help="Restrict to these labels (repeatable)"),
):
    configure_logging(settings.log_level)
    try:
        run_all_channels(config_path, threads, output_dir, channel)
    except TeqError as e:
        err_console.print(f"[bold red]error:[/bold red] {escape(str(e))}", soft_wrap=True)
        raise typer.Exit(code=1)


if __name__ == "__main__":
    app()
