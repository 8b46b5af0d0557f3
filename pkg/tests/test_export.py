"""Delimited output round trips."""

from fractions import Fraction

from nilnet.export import (
    format_table,
    frac_str,
    read_points_csv,
    write_points_csv,
    write_records,
    write_region,
)
from nilnet.tiling import Region


def test_frac_str():
    assert frac_str(Fraction(3, 4)) == "3/4"
    assert frac_str(Fraction(-8, 2)) == "-4"
    assert frac_str(5) == "5"


def test_points_csv_roundtrip(tmp_path):
    pts = [
        (Fraction(1, 3), Fraction(-2), Fraction(7, 2)),
        (Fraction(0), Fraction(5), Fraction(-1, 6)),
    ]
    path = tmp_path / "pts.csv"
    write_points_csv(str(path), pts, extra_comments=("a comment",))
    text = path.read_text()
    assert text.startswith("# a comment")
    assert "1/3" in text
    assert read_points_csv(str(path)) == pts


def test_write_records(tmp_path):
    p1 = tmp_path / "a.records"
    write_records(str(p1), ["x\t1", "y\t2"])
    assert p1.read_text() == "x\t1\ny\t2\n"
    p2 = tmp_path / "b.records"
    write_records(str(p2), "already text\n")
    assert p2.read_text() == "already text\n"


def test_write_region(tmp_path, heis_int):
    region = Region(frozenset([(1, 2, 3), (0, 0, 0)]), heis_int)
    path = tmp_path / "region.txt"
    write_region(str(path), region)
    assert path.read_text() == "0 0 0\n1 2 3\n"


def test_format_table():
    out = format_table(["name", "value"], [("alpha", 10), ("b", 2)])
    lines = out.splitlines()
    assert lines[0].startswith("name")
    assert lines[1].split() == ["alpha", "10"]
    assert len(lines) == 3
