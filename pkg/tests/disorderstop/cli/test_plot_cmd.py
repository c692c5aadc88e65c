# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Unit test for the plot command"""
import pathlib

from click.testing import CliRunner

from disorderstop.boundary import write_boundary_csv
from disorderstop.cli.commands.plot import plot_cmd
from disorderstop.model import Boundary


def test_plot_two_boundaries(
    solved_linear: Boundary, solved_geometric: Boundary, tmp_dir: str
) -> None:
    linear = pathlib.Path(tmp_dir) / "linear.csv"
    geometric = pathlib.Path(tmp_dir) / "geometric.csv"
    write_boundary_csv(solved_linear, linear)
    write_boundary_csv(solved_geometric, geometric)
    out = pathlib.Path(tmp_dir) / "boundaries.svg"

    runner = CliRunner()
    result = runner.invoke(
        plot_cmd, ["--in", str(linear), "--in", str(geometric), "--out", str(out)]
    )

    assert result.exit_code == 0, result.output
    svg = out.read_text()
    assert 'id="boundary-0"' in svg
    assert 'id="boundary-1"' in svg


def test_plot_requires_input(tmp_dir: str) -> None:
    runner = CliRunner()
    result = runner.invoke(plot_cmd, ["--out", str(pathlib.Path(tmp_dir) / "x.svg")])

    assert result.exit_code == 2


def test_plot_malformed_input(tmp_dir: str) -> None:
    bad = pathlib.Path(tmp_dir) / "bad.csv"
    bad.write_text("x,y\n0,1\n")

    runner = CliRunner()
    result = runner.invoke(
        plot_cmd, ["--in", str(bad), "--out", str(pathlib.Path(tmp_dir) / "x.svg")]
    )

    assert result.exit_code == 1
    assert "must have columns" in result.output
