# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Module for value command"""

import logging
import pathlib
from typing import Any

import click

from disorderstop import const
from disorderstop.cli.config import DisorderConfig
from disorderstop.cli.options.common import (
    common_options,
    handle_exceptions,
    mc_options,
    model_options,
)
from disorderstop.cli.utils import load_boundary, mc_config_from, to_json
from disorderstop.expectation import value_integral
from disorderstop.model import make_problem


logger = logging.getLogger(__name__)


@click.command(
    name="value",
    help="Estimate the optimal value for a solved boundary.",
)
@click.pass_context
@common_options
@model_options
@mc_options(const.DEFAULT_VALUE_PATHS)
@click.option(
    "--boundary",
    type=click.Path(path_type=pathlib.Path, dir_okay=False),
    required=True,
    help="Boundary CSV written by the solve command.",
)
@handle_exceptions
def value_cmd(ctx: click.Context, **kwargs: Any) -> None:
    """Print the value estimate with its standard error as JSON."""
    config: DisorderConfig = kwargs["config"]
    problem = make_problem(
        kwargs["problem"], config.model, config.prior, kwargs["density_weighted"]
    )
    boundary = load_boundary(kwargs["boundary"], problem)
    mc_config = mc_config_from(kwargs)

    generic = value_integral(
        problem, boundary, mc_config.batch(boundary.grid), mc_config.threads
    )
    value = generic.scaled(problem.payoff_scale, problem.payoff_offset)
    click.echo(
        to_json(
            {
                "problem": kwargs["problem"],
                "density_weighted": kwargs["density_weighted"],
                "value": value.value,
                "std_error": value.std_error,
                "n_paths": value.n_paths,
                "grid_steps": boundary.n_steps,
                "seed": mc_config.seed,
            }
        )
    )
