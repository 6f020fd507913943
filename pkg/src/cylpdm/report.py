"""CSV, JSON and plain-table emitters. Output is a pure function of the rows."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict
from fractions import Fraction
from typing import Iterable, Sequence

from .analytic import SpectrumLine, is_complex

SPECTRUM_COLUMNS = (
    "n_rho",
    "m",
    "n_axial",
    "branch",
    "kz2_analytic",
    "kz2_oracle",
    "E_analytic",
    "E_oracle",
    "residual_kz2",
    "residual_E",
    "constraint_ok",
    "flags",
)


def fmt_value(value) -> str:
    if value is None:
        return ""
    if is_complex(value):
        return "complex"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def line_flags(line: SpectrumLine) -> str:
    tokens = list(line.flags)
    if line.status:
        tokens.insert(0, f"status={line.status}")
    return ";".join(tokens)


def spectrum_row(line: SpectrumLine) -> dict:
    return {
        "n_rho": line.qn.n_rho,
        "m": line.qn.m,
        "n_axial": line.qn.n_axial,
        "branch": line.branch,
        "kz2_analytic": line.kz2,
        "kz2_oracle": line.kz2_oracle,
        "E_analytic": line.E_analytic,
        "E_oracle": line.E_oracle,
        "residual_kz2": line.residual_kz2,
        "residual_E": line.residual_E,
        "constraint_ok": line.constraint_ok,
        "flags": line_flags(line),
    }


def line_record(line: SpectrumLine) -> dict:
    """Structured record with every field of the line."""
    record = asdict(line)
    record["qn"] = asdict(line.qn)
    record["flags"] = list(line.flags)
    return _jsonable(record)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if is_complex(obj):
        return "complex"
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def to_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt_value(row.get(c)) for c in columns])
    return buf.getvalue()


def to_json(records: Sequence[dict]) -> str:
    return json.dumps(_jsonable(list(records)), indent=2, sort_keys=False) + "\n"


def to_table(rows: Sequence[dict], columns: Sequence[str]) -> str:
    def cell(v):
        if isinstance(v, float) and not is_complex(v):
            return f"{v:.10g}"
        return fmt_value(v)

    body = [[cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(b[i]) for b in body]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(b, widths)) for b in body]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render(rows: Sequence[dict], columns: Sequence[str], fmt: str, records: Sequence[dict] | None = None) -> str:
    if fmt == "csv":
        return to_csv(rows, columns)
    if fmt == "json":
        return to_json(records if records is not None else rows)
    if fmt == "table":
        return to_table(rows, columns)
    raise ValueError(f"unknown format {fmt!r}")
