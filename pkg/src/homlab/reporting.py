"""Run reports: effective config echoed, verdicts, version stamp, timing.

Reports are reproducible bit-exactly given identical configs, except for the
timing field, which is excluded from the determinism contract.
"""

from __future__ import annotations

import csv
import io
import json

from . import __version__


def jsonable(obj):
    """Coerce report payloads (tuples, frozensets, dataclasses) to JSON."""
    from dataclasses import asdict, is_dataclass
    from fractions import Fraction

    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, bytes):
        return obj.hex()
    if isinstance(obj, Fraction):
        return {"numerator": obj.numerator, "denominator": obj.denominator}
    return obj


def build_report(command, config, verdicts, elapsed):
    return {
        "command": command,
        "config": jsonable(config),
        "verdicts": jsonable(verdicts),
        "version": __version__,
        "timing_seconds": round(elapsed, 6),
    }


def report_to_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def deterministic_view(report):
    """The report minus its timing field, serialised canonically."""
    trimmed = {k: v for k, v in report.items() if k != "timing_seconds"}
    return json.dumps(trimmed, sort_keys=True)


def rows_to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
