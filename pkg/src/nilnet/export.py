"""Delimited exports: exact-rational CSV point sets and record tables."""

from __future__ import annotations

import csv
from fractions import Fraction


def frac_str(x):
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def write_points_csv(path, points, extra_comments=()):
    """CSV with one p/q column and one float column per coordinate."""
    points = list(points)
    n = len(points[0]) if points else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for comment in extra_comments:
            fh.write(f"# {comment}\n")
        header = [f"x{i}" for i in range(1, n + 1)] + [
            f"x{i}_float" for i in range(1, n + 1)
        ]
        writer.writerow(header)
        for p in points:
            row = [frac_str(c) for c in p] + [repr(float(Fraction(c))) for c in p]
            writer.writerow(row)


def read_points_csv(path):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header = rows[0]
    n = sum(1 for h in header if not h.endswith("_float"))
    for row in rows[1:]:
        out.append(tuple(Fraction(c) for c in row[:n]))
    return out


def write_region(path, region):
    with open(path, "w", encoding="utf-8") as fh:
        for t in sorted(region.tiles):
            fh.write(" ".join(str(int(c)) for c in t) + "\n")


def write_records(path, lines_or_text):
    text = (
        lines_or_text
        if isinstance(lines_or_text, str)
        else "\n".join(lines_or_text) + "\n"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def format_table(headers, rows):
    """Plain aligned text table."""
    cols = [headers] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(headers))]
    lines = []
    for r in cols:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"
