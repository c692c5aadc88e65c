# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Module for validate command"""

import logging
import pathlib
import sys
from typing import Any, List, Optional

import click

from disorderstop import const, validate
from disorderstop.cli.config import DisorderConfig
from disorderstop.cli.options.common import (
    common_options,
    handle_exceptions,
    mc_options,
    model_options,
)
from disorderstop.cli.utils import comma_sep_to_list, load_boundary, mc_config_from
from disorderstop.model import Boundary, ProblemKind, make_problem
from disorderstop.reporter import ResultsReporter


logger = logging.getLogger(__name__)

_ALL = "all"


def _checks_to_run(names: List[str]) -> List[str]:
    """Expand 'all' and reject unknown check names."""
    selected: List[str] = []
    for name in names:
        expanded = list(validate.ALL_CHECKS) if name == _ALL else [name]
        for check in expanded:
            if check not in validate.ALL_CHECKS:
                raise ValueError(
                    f"unknown check '{check}', choose from "
                    f"{', '.join(validate.ALL_CHECKS + (_ALL,))}"
                )
            if check not in selected:
                selected.append(check)
    return selected


@click.command(
    name="validate",
    help="Check a solved boundary against brute-force simulation of the raw model.",
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
@click.option(
    "--other-boundary",
    type=click.Path(path_type=pathlib.Path, dir_okay=False),
    help="Boundary of the complementary problem for the dichotomy check; "
    "solved on the fly when omitted.",
)
@click.option(
    "--checks",
    type=str,
    default=_ALL,
    show_default=True,
    help="Comma-separated checks: lemma, dominance, dichotomy, residuals, value or all.",
)
@click.option(
    "--solve-paths",
    type=click.IntRange(min=1),
    default=const.DEFAULT_SOLVE_PATHS,
    show_default=True,
    help="Paths per node for boundary equations (residuals, on-the-fly solves).",
)
@click.option(
    "--out",
    type=click.Path(path_type=pathlib.Path, dir_okay=False),
    help="Write the JSON report here instead of standard output.",
)
@handle_exceptions
def validate_cmd(ctx: click.Context, **kwargs: Any) -> None:
    """Run the selected checks and exit non-zero when any fails."""
    config: DisorderConfig = kwargs["config"]
    kind = ProblemKind(kwargs["problem"])
    weighted: bool = kwargs["density_weighted"]
    boundary = load_boundary(
        kwargs["boundary"], make_problem(kind, config.model, config.prior, weighted)
    )
    checks = _checks_to_run(comma_sep_to_list(kwargs["checks"]))

    other: Optional[Boundary] = None
    other_path: Optional[pathlib.Path] = kwargs.get("other_boundary")
    if other_path is not None:
        other_kind = validate.complementary_kind(kind)
        other = load_boundary(
            other_path, make_problem(other_kind, config.model, config.prior, weighted)
        )

    report = validate.run_checks(
        checks,
        config.model,
        config.prior,
        boundary,
        kind,
        mc_config_from(kwargs),
        solve_config=mc_config_from(kwargs, n_paths=kwargs["solve_paths"]),
        other_boundary=other,
        density_weighted=weighted,
    )

    out: Optional[pathlib.Path] = kwargs.get("out")
    if out is not None:
        report.write_json(out)
        ResultsReporter().report_results(report)
        logger.info(f"Validation report written to {out}")
    else:
        click.echo(report.to_json())

    if not report.passed:
        logger.error(f"{len(report.failures)} check(s) failed")
        sys.exit(const.FAILED_CHECK_EXIT_CODE)
