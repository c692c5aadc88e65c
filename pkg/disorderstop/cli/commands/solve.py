# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Module for solve command"""

import logging
import pathlib
from typing import Any, Optional

import click

from disorderstop import const
from disorderstop.boundary import (
    posterior_boundary,
    solve_boundary,
    terminal_value,
    write_boundary_csv,
)
from disorderstop.cli.config import DisorderConfig
from disorderstop.cli.options.common import (
    common_options,
    handle_exceptions,
    mc_options,
    model_options,
)
from disorderstop.cli.utils import mc_config_from
from disorderstop.model import make_problem
from disorderstop.simulate import dump_paths_csv, simulate_batch, uniform_grid


logger = logging.getLogger(__name__)


@click.command(
    name="solve",
    help="Solve the optimal stopping boundary by backward induction.",
)
@click.pass_context
@common_options
@model_options
@mc_options(const.DEFAULT_SOLVE_PATHS)
@click.option(
    "--grid-steps",
    type=click.IntRange(min=1),
    default=const.DEFAULT_GRID_STEPS,
    show_default=True,
    help="Number of equal steps partitioning [0, T].",
)
@click.option(
    "--out",
    type=click.Path(path_type=pathlib.Path, dir_okay=False),
    required=True,
    help="Output CSV with columns t,a.",
)
@click.option(
    "--posterior",
    is_flag=True,
    help="Also write the boundary in posterior-probability units (column pi).",
)
@click.option(
    "--dump-paths",
    type=click.Path(path_type=pathlib.Path, dir_okay=False),
    help="Write the psi paths of the master batch to this CSV for debugging.",
)
@handle_exceptions
def solve_cmd(ctx: click.Context, **kwargs: Any) -> None:
    """Run the backward induction and write the boundary."""
    config: DisorderConfig = kwargs["config"]
    problem = make_problem(
        kwargs["problem"], config.model, config.prior, kwargs["density_weighted"]
    )
    grid = uniform_grid(config.model.horizon_T, kwargs["grid_steps"])
    mc_config = mc_config_from(kwargs)

    logger.debug(
        f"Solving {kwargs['problem']} on {kwargs['grid_steps']} steps "
        f"with {mc_config.n_paths} paths, seed {mc_config.seed}"
    )
    boundary = solve_boundary(problem, grid, mc_config)

    posterior = posterior_boundary(boundary, config.prior) if kwargs["posterior"] else None
    out: pathlib.Path = kwargs["out"]
    write_boundary_csv(boundary, out, posterior)

    dump: Optional[pathlib.Path] = kwargs.get("dump_paths")
    if dump is not None:
        paths = simulate_batch(problem, problem.psi0, mc_config.batch(grid), mc_config.threads)
        dump_paths_csv(paths, dump)
        logger.info(f"Wrote {len(paths)} psi paths to {dump}")

    click.echo(f"a(T) = {terminal_value(problem)!r}")
    click.echo(f"a(0) = {float(boundary.values[0])!r}")
    logger.info(f"Boundary written to {out}")
