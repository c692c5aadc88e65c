# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Main entrypoint for disorder-stop"""

import click

from disorderstop.cli.commands.plot import plot_cmd
from disorderstop.cli.commands.solve import solve_cmd
from disorderstop.cli.commands.validate import validate_cmd
from disorderstop.cli.commands.value import value_cmd


EPILOG = "The model config schema is documented in README.md"

CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"])


@click.group(
    name="disorder-stop",
    help="Optimal stopping of a (geometric) Brownian motion with a disorder",
    context_settings=CONTEXT_SETTINGS,
    epilog=EPILOG,
)
@click.pass_context
def root_cmd(ctx: click.Context) -> None:
    """Root command"""


root_cmd.add_command(solve_cmd)
root_cmd.add_command(value_cmd)
root_cmd.add_command(validate_cmd)
root_cmd.add_command(plot_cmd)
