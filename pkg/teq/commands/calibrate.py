import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from teq.core.errors import TeqError
from teq.core.log import console as err_console
from teq.sim.calibrate import MIN_CALIBRATION_BITS, calibrate_uncoded


def _parse_ebn0_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"{text!r} is not a comma separated list of numbers")


def cmd_calibrate(
    ebn0: str = typer.Option("0,2,4", "--ebn0", help="Comma separated Eb/N0 points in dB"),
    bits: int = typer.Option(1_000_000, "--bits", help=f"Bits per point (>= {MIN_CALIBRATION_BITS})"),
    seed: int = typer.Option(0, "--seed", min=0),
):
    """Uncoded QPSK over AWGN against Q(sqrt(2 Eb/N0))."""
    points = _parse_ebn0_list(ebn0)
    if bits < MIN_CALIBRATION_BITS:
        err_console.print(f"[bold red]error:[/bold red] refusing to calibrate with {bits} bits; need at least {MIN_CALIBRATION_BITS}")
        raise typer.Exit(code=1)

    table = Table(title="Uncoded QPSK calibration")
    for col in ("Eb/N0 dB", "bits", "errors", "measured BER", "theory BER", "MC sigma", "|delta|/sigma"):
        table.add_column(col, justify="right")
    try:
        for point in points:
            cal = calibrate_uncoded(point, bits, seed)
            table.add_row(
                f"{cal.ebn0_db:g}",
                str(cal.bits),
                str(cal.bit_errors),
                f"{cal.ber:.6e}",
                f"{cal.theory:.6e}",
                f"{cal.mc_sigma:.3e}",
                f"{cal.deviation_sigmas:.2f}",
            )
    except TeqError as e:
        err_console.print(f"[bold red]error:[/bold red] {escape(str(e))}")
        raise typer.Exit(code=1)
    Console(width=120).print(table)
