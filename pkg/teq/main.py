import typer

from teq import __version__
from teq.commands import calibrate, plot, sweep
from teq.core.config import settings
from teq.core.log import configure_logging

app = typer.Typer(
    name="teq",
    help="Turbo-equalization BER simulator: COD-MAP vs MAP-SBVP extrinsic feedback.",
    no_args_is_help=True,
    add_completion=False,
)


def _version_callback(value: bool):
    if value:
        typer.echo(f"teq {__version__}")
        raise typer.Exit()


# ---- Global Options ----
@app.callback()
def main(
    log_level: str = typer.Option(settings.log_level, "--log-level", help="DEBUG, INFO, WARNING, ..."),
    version: bool = typer.Option(False, "--version", callback=_version_callback, is_eager=True),
):
    configure_logging(log_level)


# ---- Register Commands ----
app.command(
    "sweep",
    context_settings={"allow_extra_args": True, "ignore_unknown_options": True},
)(sweep.cmd_sweep)
app.command("plot")(plot.cmd_plot)
app.command("calibrate")(calibrate.cmd_calibrate)


if __name__ == "__main__":
    app()
