"""Deterministic JSON/CSV report writing shared by the CLI commands.

Rationals print as `num/den` with positive denominator; covering-radius
floats print with 6 significant digits; JSON keys are sorted so exhaustive
runs are byte-identical across invocations.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__


def fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def float_str(value: float) -> str:
    return f"{value:.6g}"


def _plain(value):
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, float):
        return float_str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    return str(value)


@dataclass
class ExperimentReport:
    command: str
    config: dict
    columns: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "version": __version__,
            "config": {k: _plain(v) for k, v in self.config.items()},
            "rows": [{k: _plain(v) for k, v in row.items()} for row in self.rows],
            "summary": {k: _plain(v) for k, v in self.summary.items()},
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_plain(row.get(col, "")) for col in self.columns])
        return buf.getvalue()

    def write(self, out: Optional[str], fmt: str) -> None:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        if out is None or out == "-":
            sys.stdout.write(text)
        else:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
