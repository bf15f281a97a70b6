import logging
from pathlib import Path
from typing import Optional, Sequence

import typer
from rich.markup import escape

from teq.core.errors import TeqError
from teq.core.log import console as err_console
from teq.results.store import read_csv
from teq.sim.schemas import BerRecord
from teq.utils.svg import render_ber_svg

logger = logging.getLogger(__name__)


def write_plot(records: Sequence[BerRecord], out_svg: Path, title: Optional[str] = None) -> Path:
    channels = sorted({r.channel for r in records})
    svg = render_ber_svg(records, title=title or f"Channel {', '.join(channels)}: BER vs Eb/N0")
    out_svg.parent.mkdir(parents=True, exist_ok=True)
    out_svg.write_text(svg, encoding="utf-8")
    return out_svg


def cmd_plot(
    csv_path: Path = typer.Argument(..., help="results.csv written by `sweep`"),
    out_svg: Path = typer.Option(..., "-o", "--output", help="SVG file to write"),
    title: Optional[str] = typer.Option(None, "--title"),
):
    """Render BER (log scale) vs Eb/N0 from a results CSV. Runs no simulation."""
    try:
        records = read_csv(csv_path)
    except OSError as e:
        err_console.print(f"[bold red]error:[/bold red] cannot read {escape(str(csv_path))}: {escape(e.strerror or str(e))}")
        raise typer.Exit(code=1)
    except TeqError as e:
        err_console.print(f"[bold red]error:[/bold red] {escape(str(csv_path))} {escape(str(e))}", soft_wrap=True)
        raise typer.Exit(code=1)

    write_plot(records, out_svg, title)
    logger.info("wrote %s", out_svg)
