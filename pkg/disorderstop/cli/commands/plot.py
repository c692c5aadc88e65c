# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Module for plot command"""

import logging
import pathlib
from typing import Any, Tuple

import click

from disorderstop.boundary import read_boundary_csv
from disorderstop.cli.options.common import common_options, handle_exceptions
from disorderstop.plot import plot_boundaries


logger = logging.getLogger(__name__)


@click.command(name="plot", help="Plot one or more boundary CSV files as SVG.")
@click.pass_context
@common_options
@click.option(
    "--in",
    "inputs",
    type=click.Path(path_type=pathlib.Path, dir_okay=False),
    multiple=True,
    required=True,
    help="Boundary CSV; repeat to overlay several curves.",
)
@click.option(
    "--out",
    type=click.Path(path_type=pathlib.Path, dir_okay=False),
    required=True,
    help="Output SVG file.",
)
@handle_exceptions
def plot_cmd(ctx: click.Context, **kwargs: Any) -> None:
    """Render boundaries as step curves."""
    inputs: Tuple[pathlib.Path, ...] = kwargs["inputs"]
    curves = [(path.stem, read_boundary_csv(path)) for path in inputs]
    plot_boundaries(curves, kwargs["out"])
    logger.info(f"Plot written to {kwargs['out']}")
