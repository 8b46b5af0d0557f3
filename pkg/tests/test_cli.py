"""End-to-end command-line driver runs."""

import pytest
from click.testing import CliRunner

from nilnet.cli import main

JACOBI_BAD = """
dimension 5
step 3
structure_constants
(1, 2, 4, 1)
(3, 4, 5, 1)
"""


@pytest.fixture()
def runner():
    return CliRunner()


def test_check_pass(runner, tmp_path):
    result = runner.invoke(main, ["check", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert "check: PASS" in result.output
    assert (tmp_path / "check.records").exists()


def test_check_jacobi_violation(runner, tmp_path):
    bad = tmp_path / "bad.group"
    bad.write_text(JACOBI_BAD)
    result = runner.invoke(main, ["check", "--group", str(bad),
                                  "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "JacobiViolation" in result.output


def test_check_abelian(runner, tmp_path):
    result = runner.invoke(main, ["check", "--group", "abelian3",
                                  "--out", str(tmp_path)])
    assert result.exit_code == 0


def test_unparseable_group_is_input_error(runner, tmp_path):
    bad = tmp_path / "bad.group"
    bad.write_text("bananas 4\n")
    result = runner.invoke(main, ["check", "--group", str(bad),
                                  "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_unknown_group_is_input_error(runner, tmp_path):
    result = runner.invoke(main, ["check", "--group", "nope",
                                  "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_net_requires_window(runner, tmp_path):
    result = runner.invoke(main, ["net", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_net_outputs(runner, tmp_path):
    result = runner.invoke(main, [
        "net", "--window", "0:3,0:3,0:3", "--format", "svg",
        "--out", str(tmp_path),
    ])
    assert result.exit_code == 0, result.output
    assert "points 64" in result.output
    assert (tmp_path / "net.csv").exists()
    assert (tmp_path / "net.svg").exists()


def test_dyadic_tile(runner, tmp_path):
    result = runner.invoke(main, ["dyadic", "--level", "2",
                                  "--out", str(tmp_path)])
    assert result.exit_code == 0
    assert "points 64" in result.output


def test_dyadic_describe(runner, tmp_path):
    result = runner.invoke(main, [
        "dyadic", "--describe-box", "0:3,0:3,0:3", "--out", str(tmp_path),
    ])
    assert result.exit_code == 0
    text = (tmp_path / "description.txt").read_text()
    assert text.count("+ 1") == 6
    assert text.count("+ 0") == 16


def test_perimeter_combinatorial(runner, tmp_path):
    result = runner.invoke(main, [
        "perimeter", "--region-box", "0:1,0:1,0:1", "--out", str(tmp_path),
    ])
    assert result.exit_code == 0
    assert "86/3" in result.output


def test_spread_verdict(runner, tmp_path):
    result = runner.invoke(main, [
        "spread", "--levels", "2", "--out", str(tmp_path),
    ])
    assert result.exit_code == 0
    assert "bounded True" in result.output


def test_strongbd_shift_passes(runner, tmp_path):
    result = runner.invoke(main, [
        "strongbd", "--mode", "shift", "--levels", "3",
        "--out", str(tmp_path), "--format", "svg",
    ])
    assert result.exit_code == 0, result.output
    assert "verdict\tpass" in result.output
    assert (tmp_path / "strongbd.svg").exists()


def test_strongbd_halfspace_fails(runner, tmp_path):
    result = runner.invoke(main, [
        "strongbd", "--mode", "halfspace", "--levels", "3",
        "--window", "0:31,0:31,0:31", "--out", str(tmp_path),
    ])
    assert result.exit_code == 1
    assert "verdict\tfail" in result.output


def test_qc_generate(runner, tmp_path):
    result = runner.invoke(main, [
        "qc", "--group", "abelian2", "--window", "0:16,0:16",
        "--out", str(tmp_path),
    ])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "qc.csv").exists()
    assert "trend" in result.output


def test_render_levels(runner, tmp_path):
    result = runner.invoke(main, [
        "render", "--levels", "0,1", "--out", str(tmp_path),
    ])
    assert result.exit_code == 0
    assert (tmp_path / "dyadic_level0.svg").exists()
    assert (tmp_path / "dyadic_level1.svg").exists()
    assert "level 1: 8 points" in result.output


def test_render_needs_axes_in_dim4(runner, tmp_path):
    result = runner.invoke(main, [
        "render", "--group", "filiform4", "--levels", "1",
        "--out", str(tmp_path),
    ])
    assert result.exit_code == 2
    ok = runner.invoke(main, [
        "render", "--group", "filiform4", "--levels", "1",
        "--axes", "1,4", "--out", str(tmp_path),
    ])
    assert ok.exit_code == 0


def test_discrepancy_records(runner, tmp_path):
    result = runner.invoke(main, [
        "discrepancy", "--lam2", "1,1,2", "--window", "0:7,0:7,0:7",
        "--levels", "2", "--out", str(tmp_path),
    ])
    assert result.exit_code == 0
    assert (tmp_path / "discrepancy.records").exists()
