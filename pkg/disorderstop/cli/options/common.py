# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""
Common command options for disorder-stop commands.
"""

import functools
import logging
import pathlib
import sys
import traceback
from typing import Any, Callable, Dict, Sequence, TypeVar

import click

from disorderstop import const
from disorderstop.boundary import BoundaryFormatError, BracketError
from disorderstop.cli.config import DisorderConfig, DisorderConfigError, load_from_file
from disorderstop.cli.log import set_log_level
from disorderstop.model import ProblemKind


F = TypeVar("F", bound=Callable[..., Any])

logger = logging.getLogger(__name__)


def handle_exceptions(func: F) -> Any:
    """Log errors and turn them into the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args: Sequence[Any], **kwargs: Dict[Any, Any]) -> Any:
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except BracketError as ex:
            logger.error(f"Solver Error: {str(ex)}")
            sys.exit(const.BRACKET_FAILURE_EXIT_CODE)
        except (DisorderConfigError, BoundaryFormatError) as ex:
            logger.error(f"Input Error: {str(ex)}")
            sys.exit(const.ERROR_EXIT_CODE)
        except Exception as ex:
            traceback_str = traceback.format_exc()
            logger.error(f"Disorder-stop Error: {str(ex)}")
            logger.debug(traceback_str)
            sys.exit(const.ERROR_EXIT_CODE)

    return wrapper


def debug_to_log_level(ctx: click.Context, param: str, value: bool) -> None:
    """Sets logging level based on debug flag."""

    log_level = logging.DEBUG if value else logging.INFO
    set_log_level(log_level)


def load_config(
    ctx: click.Context, param: str, value: pathlib.Path
) -> DisorderConfig:
    """Load and validate the model config, exiting with an error naming the
    offending key when it is invalid."""
    try:
        return load_from_file(value)
    except DisorderConfigError as ex:
        logger.error(str(ex))
        sys.exit(const.ERROR_EXIT_CODE)


def common_options(f: F) -> F:
    """
    Configures common options used across commands.
    """

    f = click.option(
        "--debug",
        default=False,
        is_flag=True,
        is_eager=True,
        envvar=const.DEBUG_ENV,
        help="Enable debug logging messages.",
        callback=debug_to_log_level,
    )(f)
    return f


def model_options(f: F) -> F:
    """
    Configure options selecting the model config and the stopping problem.
    """
    f = click.option(
        "--config",
        "config",
        type=click.Path(path_type=pathlib.Path),
        envvar=const.CONFIG_ENV,
        required=True,
        help="Path to the model config file (keys mu1, mu2, sigma, T, g0, rho).",
        callback=load_config,
    )(f)
    f = click.option(
        "--problem",
        type=click.Choice([kind.value for kind in ProblemKind]),
        required=True,
        help="Stopping problem to solve.",
    )(f)
    f = click.option(
        "--density-weighted",
        is_flag=True,
        default=False,
        help="Weight the pre-disorder drift of the linear and log-utility "
        "problems by the likelihood ratio psi + 1 - G(t).",
    )(f)
    return f


def mc_options(default_paths: int) -> Callable[[F], F]:
    """
    Configure Monte Carlo options; the path count default depends on the command.
    """

    def decorator(f: F) -> F:
        f = click.option(
            "--paths",
            type=click.IntRange(min=1),
            default=default_paths,
            show_default=True,
            help="Number of simulated paths.",
        )(f)
        f = click.option(
            "--seed",
            type=int,
            default=const.DEFAULT_SEED,
            show_default=True,
            help="Master random seed.",
        )(f)
        f = click.option(
            "--threads",
            type=click.IntRange(min=0),
            envvar=const.THREADS_ENV,
            default=0,
            show_default=True,
            help="Worker threads for path simulation, 0 picks the CPU count.",
        )(f)
        return f

    return decorator
