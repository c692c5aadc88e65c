# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

import json
import pathlib
from typing import Any, Dict, List

from disorderstop.boundary import check_grid, read_boundary_csv
from disorderstop.expectation import MCConfig
from disorderstop.model import Boundary, GenericStopProblem


def comma_sep_to_list(string: str) -> List[str]:
    """Convert comma-sep string to list of strings and strip."""
    string = string.strip() if string else ""
    return list(map(str.strip, string.split(","))) if string else []


def mc_config_from(kwargs: Dict[Any, Any], **overrides: Any) -> MCConfig:
    """Reusable Monte Carlo settings for all commands."""
    settings = dict(
        seed=kwargs["seed"],
        n_paths=kwargs["paths"],
        threads=kwargs.get("threads", 1),
    )
    settings.update(overrides)
    return MCConfig(**settings)


def load_boundary(file_path: pathlib.Path, problem: GenericStopProblem) -> Boundary:
    """Read a boundary CSV and check it covers the problem horizon."""
    boundary = read_boundary_csv(file_path)
    check_grid(boundary, problem)
    return boundary


def to_json(data: Dict[str, Any]) -> str:
    """Stable JSON for machine-readable output."""
    return json.dumps(data, indent=2, sort_keys=True)
