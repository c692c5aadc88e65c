# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Common test fixtures."""

import tempfile
from typing import Generator, TypeVar

import pytest

from disorderstop.boundary import solve_boundary
from disorderstop.expectation import MCConfig
from disorderstop.model import (
    Boundary,
    DisorderModel,
    GenericStopProblem,
    UniformPrior,
    make_geometric_problem,
    make_linear_problem,
)
from disorderstop.simulate import uniform_grid
from tests.testutils import FIGURE1_VALUES


T = TypeVar("T")
YieldFixture = Generator[T, None, None]

_TEST_PREFIX = "disorderstop_tests"


@pytest.fixture(scope="function")
def tmp_dir() -> YieldFixture[str]:
    with tempfile.TemporaryDirectory(prefix=_TEST_PREFIX) as tmpdir:
        yield tmpdir


@pytest.fixture(scope="session")
def figure1_model() -> DisorderModel:
    return DisorderModel.model_validate(FIGURE1_VALUES)


@pytest.fixture(scope="session")
def figure1_prior() -> UniformPrior:
    return UniformPrior.model_validate(FIGURE1_VALUES)


@pytest.fixture(scope="session")
def linear_problem(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> GenericStopProblem:
    return make_linear_problem(figure1_model, figure1_prior)


@pytest.fixture(scope="session")
def geometric_problem(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> GenericStopProblem:
    return make_geometric_problem(figure1_model, figure1_prior)


@pytest.fixture(scope="session")
def small_mc() -> MCConfig:
    """Few paths; enough for structural properties, not for accuracy."""
    return MCConfig(seed=7, n_paths=2000, threads=1)


@pytest.fixture(scope="session")
def solved_linear(linear_problem: GenericStopProblem, small_mc: MCConfig) -> Boundary:
    return solve_boundary(linear_problem, uniform_grid(1.0, 10), small_mc)


@pytest.fixture(scope="session")
def solved_geometric(
    geometric_problem: GenericStopProblem, small_mc: MCConfig
) -> Boundary:
    return solve_boundary(geometric_problem, uniform_grid(1.0, 10), small_mc)
