"""Curve CSV files, Frenet tables and JSON reports."""

import io
import json
import re

import numpy as np

from .errors import CurveFormatError, UmbilicalError
from .frames import SampledCurve

_HEADER = re.compile(r"#\s*model=c(?P<c>[+-]?\d+)\s+dim=(?P<dim>\d+)\s+ds=(?P<ds>\S+)\s*$")


def _fmt(x):
    return format(float(x), ".17g")


def format_curve(curve):
    lines = [f"# model=c{curve.c} dim={curve.dim} ds={_fmt(curve.ds)}",
             ",".join(["s"] + [f"x{i + 1}" for i in range(curve.dim)])]
    for s, p in zip(curve.s, curve.points):
        lines.append(",".join([_fmt(s)] + [_fmt(x) for x in p]))
    return "\n".join(lines) + "\n"


def write_curve(curve, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_curve(curve))


def parse_curve(text):
    """Parse the curve CSV format; every problem is reported with its line number."""
    lines = text.splitlines()
    if not lines:
        raise CurveFormatError("empty file", line=1)
    m = _HEADER.match(lines[0].strip())
    if m is None:
        raise CurveFormatError("expected '# model=c<c> dim=<dim> ds=<ds>'", line=1)
    c, dim = int(m["c"]), int(m["dim"])
    try:
        ds = float(m["ds"])
    except ValueError:
        raise CurveFormatError(f"bad ds value {m['ds']!r}", line=1) from None
    if c not in (-1, 0, 1):
        raise CurveFormatError(f"model must be c-1, c0 or c1, got c{c}", line=1)
    if len(lines) < 2:
        raise CurveFormatError("missing column header", line=2)
    expected = ["s"] + [f"x{i + 1}" for i in range(dim)]
    header = [h.strip() for h in lines[1].split(",")]
    if header != expected:
        raise CurveFormatError(f"expected header {','.join(expected)}", line=2)

    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != dim + 1:
            raise CurveFormatError(f"expected {dim + 1} fields, got {len(fields)}", line=lineno)
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise CurveFormatError(f"non-numeric field in {line.strip()!r}", line=lineno) from None
    if not rows:
        raise CurveFormatError("no samples", line=len(lines) + 1)
    data = np.array(rows)
    try:
        return SampledCurve(c, data[:, 0], data[:, 1:], ds)
    except UmbilicalError as exc:
        raise CurveFormatError(f"invalid curve: {exc}") from exc


def read_curve(path):
    with open(path, encoding="ascii") as fh:
        return parse_curve(fh.read())


def format_table(columns):
    """CSV text from an ordered mapping of equally long columns."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in data:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def format_frenet(frenet):
    return format_table(frenet.as_columns())


def format_upper_halfspace(s, xyz):
    xyz = np.asarray(xyz)
    return format_table({"s": s, "x": xyz[:, 0], "y": xyz[:, 1], "z": xyz[:, 2]})


def dumps_report(report):
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return json.dumps(data, indent=2, allow_nan=False) + "\n"
