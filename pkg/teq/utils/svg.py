"""Static BER-vs-Eb/N0 plots: one polyline per (channel, algorithm, iteration)."""
import math
from itertools import groupby
from typing import Sequence

from jinja2 import Environment, PackageLoader, select_autoescape

from teq.sim.schemas import BerRecord

WIDTH, HEIGHT = 720, 480
PLOT = {"left": 80, "right": 540, "top": 40, "bottom": 420}
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]
DASHES = {"cod-map": "", "map-sbvp": "6 3"}

_env = Environment(
    loader=PackageLoader("teq", "templates"),
    autoescape=select_autoescape(["svg", "j2"]),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def _x_axis(xs: Sequence[float]):
    lo, hi = min(xs), max(xs)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    span = PLOT["right"] - PLOT["left"]

    def to_px(x: float) -> float:
        return PLOT["left"] + (x - lo) / (hi - lo) * span

    step = max(1, math.ceil((hi - lo) / 8))
    ticks = []
    t = math.ceil(lo)
    while t <= hi:
        ticks.append({"pos": f"{to_px(t):.2f}", "label": f"{t:g}"})
        t += step
    return to_px, ticks


def _y_axis(bers: Sequence[float]):
    positive = [b for b in bers if b > 0]
    bottom_decade = math.floor(math.log10(min(positive))) if positive else -6
    top_decade = 0
    if bottom_decade >= top_decade:
        bottom_decade = top_decade - 1
    span = PLOT["bottom"] - PLOT["top"]

    def to_px(ber: float) -> float:
        frac = (math.log10(ber) - bottom_decade) / (top_decade - bottom_decade)
        return PLOT["bottom"] - frac * span

    ticks = [
        {"pos": to_px(10.0**d), "label": f"1e{d}"}
        for d in range(bottom_decade, top_decade + 1)
    ]
    return to_px, ticks


def render_ber_svg(records: Sequence[BerRecord], title: str = "BER vs Eb/N0") -> str:
    records = sorted(records, key=BerRecord.sort_key)
    x_px, x_ticks = _x_axis([r.ebn0_db for r in records])
    y_px, y_ticks = _y_axis([r.ber for r in records])
    channels = {r.channel for r in records}

    def group_key(r: BerRecord):
        return (r.channel, r.algorithm, r.iteration)

    curves = []
    for key, rows in groupby(sorted(records, key=group_key), key=group_key):
        channel, algorithm, iteration = key
        # Zero-error points have no place on a log axis
        pts = [f"{x_px(r.ebn0_db):.2f},{y_px(r.ber):.2f}" for r in sorted(rows, key=lambda r: r.ebn0_db) if r.ber > 0]
        label = f"{algorithm} it{iteration}"
        if len(channels) > 1:
            label = f"ch {channel} {label}"
        curves.append(
            {
                "points": " ".join(pts),
                "color": PALETTE[(iteration - 1) % len(PALETTE)],
                "dash": DASHES.get(algorithm, "2 2"),
                "label": label,
            }
        )

    return _env.get_template("ber_curves.svg.j2").render(
        width=WIDTH,
        height=HEIGHT,
        plot=PLOT,
        title=title,
        x_label="Eb/N0 (dB)",
        y_label="BER",
        x_ticks=x_ticks,
        y_ticks=[
            {"pos": f"{t['pos']:.2f}", "label_y": f"{t['pos'] + 4:.2f}", "label": t["label"]} for t in y_ticks
        ],
        curves=curves,
        legend={"x": PLOT["right"] + 16, "y": PLOT["top"] + 8},
    )
