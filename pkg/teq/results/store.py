"""
results.csv: one row per BerRecord, sorted by (channel, algorithm, ebn0_db,
iteration). Floats use 10 significant digits through str.format, which is
locale independent.
"""
import csv
import io
from pathlib import Path
from typing import Iterable

from pydantic import ValidationError

from teq.core.errors import CsvFormatError
from teq.sim.schemas import BerRecord

CSV_HEADER = ["run_id", "channel", "algorithm", "ebn0_db", "iteration", "frames", "bits", "bit_errors", "ber"]


def fmt_float(x: float) -> str:
    return f"{x:.10g}"


def render_csv(run_id: str, records: Iterable[BerRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in sorted(records, key=BerRecord.sort_key):
        writer.writerow(
            [
                run_id,
                rec.channel,
                rec.algorithm,
                fmt_float(rec.ebn0_db),
                rec.iteration,
                rec.frames,
                rec.info_bits_counted,
                rec.bit_errors,
                fmt_float(rec.ber),
            ]
        )
    return buf.getvalue()


def write_csv(path: Path, run_id: str, records: Iterable[BerRecord]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(run_id, records), encoding="utf-8", newline="")
    return path


def parse_csv(text: str) -> list[BerRecord]:
    """Parse the emitted schema; raises CsvFormatError naming the first bad line."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise CsvFormatError(1, f"expected header {','.join(CSV_HEADER)}")

    records = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise CsvFormatError(line_no, f"expected {len(CSV_HEADER)} fields, got {len(row)}")
        fields = dict(zip(CSV_HEADER, row))
        try:
            rec = BerRecord(
                channel=fields["channel"],
                algorithm=fields["algorithm"],
                ebn0_db=float(fields["ebn0_db"]),
                iteration=int(fields["iteration"]),
                frames=int(fields["frames"]),
                info_bits_counted=int(fields["bits"]),
                bit_errors=int(fields["bit_errors"]),
            )
            ber = float(fields["ber"])
        except (ValueError, ValidationError) as e:
            raise CsvFormatError(line_no, str(e).splitlines()[0]) from e
        if not 0 <= rec.bit_errors <= rec.info_bits_counted:
            raise CsvFormatError(line_no, "bit_errors must lie between 0 and bits")
        if not 0.0 <= ber <= 1.0:
            raise CsvFormatError(line_no, f"ber {ber} outside [0, 1]")
        records.append(rec)

    if not records:
        raise CsvFormatError(len(rows) + 1, "no data rows")
    return records


def read_csv(path: Path) -> list[BerRecord]:
    return parse_csv(Path(path).read_text(encoding="utf-8"))
