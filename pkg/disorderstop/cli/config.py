# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""
Disorder-stop configuration module.

A config file holds the observed-process parameters and the prior as flat
keys: mu1, mu2, sigma, T, g0, rho. JSON and YAML files are both accepted.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List

import yaml
from pydantic import ValidationError

from disorderstop.model import DisorderModel, UniformPrior


logger = logging.getLogger(__name__)

CONFIG_KEYS = ("mu1", "mu2", "sigma", "T", "g0", "rho")


class DisorderConfigError(Exception):
    """Custom error to better format pydantic exceptions.

    Example pydantic error dict: {'type': str, 'loc': tuple[str], 'msg': str, 'input': str}

    """

    def __init__(self, errors: List[Dict[str, Any]]):
        self.errors = list(map(self._format, errors))
        super().__init__(f"Config file contains {len(self.errors)} error(s).")

    def _format(self, err: Dict[str, Any]) -> str:
        """Returns a formatted string with the error details."""
        msg = "Unable to load config."  # default message if we can't parse error

        if err.get("loc"):
            msg = f"Invalid config value for {err['loc'][0]}."
        if err.get("msg"):
            msg += f" {err['msg']}."  # Add error message details if present
        return msg

    def __str__(self) -> str:
        return " ".join(self.errors)


@dataclass(frozen=True)
class DisorderConfig:
    """Validated model and prior read from one config file."""

    model: DisorderModel
    prior: UniformPrior

    def to_dict(self) -> Dict[str, float]:
        return {
            "mu1": self.model.mu1,
            "mu2": self.model.mu2,
            "sigma": self.model.sigma,
            "T": self.model.horizon_T,
            "g0": self.prior.g0,
            "rho": self.prior.rho,
        }


def make_config(values: Dict[str, Any]) -> DisorderConfig:
    """Validate flat config values into a model and a prior."""
    errors: List[Dict[str, Any]] = []
    model = prior = None
    try:
        model = DisorderModel.model_validate(values)
    except ValidationError as ex:
        errors.extend(ex.errors())
    try:
        prior = UniformPrior.model_validate(values)
    except ValidationError as ex:
        # T is reported once, by the model
        errors.extend(e for e in ex.errors() if e.get("loc") != ("T",))
    if errors or model is None or prior is None:
        raise DisorderConfigError(errors)
    return DisorderConfig(model=model, prior=prior)


def load_from_file(file_path: Path) -> DisorderConfig:
    """Load a JSON or YAML file into a config object."""
    try:
        with open(file_path, "r") as config_file:
            values = yaml.safe_load(config_file)
    except FileNotFoundError:
        raise DisorderConfigError([{"msg": f"No config file found at {file_path}"}])
    except yaml.YAMLError as ex:
        raise DisorderConfigError([{"msg": f"Cannot parse {file_path}: {ex}"}])
    if not isinstance(values, dict):
        raise DisorderConfigError(
            [{"msg": f"Config file {file_path} must contain a key-value mapping"}]
        )
    logger.debug(f"Loaded config keys {sorted(values)} from {file_path}")
    return make_config(values)


def write_to_file(config: DisorderConfig, file_path: Path) -> None:
    """Write config object to a JSON or YAML file, chosen by suffix"""
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with file_path.open("w") as config_file:
        if file_path.suffix == ".json":
            json.dump(config.to_dict(), config_file, indent=2)
        else:
            yaml.safe_dump(config.to_dict(), config_file, sort_keys=False)
