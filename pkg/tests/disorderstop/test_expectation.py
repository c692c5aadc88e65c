# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Unit tests for Monte Carlo integral estimates"""

import numpy as np
import pytest

from disorderstop import const
from disorderstop.expectation import (
    IntegralEstimate,
    MCConfig,
    VolterraIntegrand,
    policy_integral,
    value_integral,
    volterra_integral,
)
from disorderstop.model import Boundary, GenericStopProblem
from disorderstop.simulate import uniform_grid
from disorderstop.validate import fixed_time_rule
from tests.testutils import constant_boundary


def test_estimate_from_samples() -> None:
    est = IntegralEstimate.from_samples(np.array([1.0, 2.0, 3.0, 4.0]))

    assert est.value == 2.5
    assert est.std_error == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2.0)
    assert est.n_paths == 4

    mapped = est.scaled(-2.0, 1.0)
    assert mapped.value == -4.0
    assert mapped.std_error == pytest.approx(2.0 * est.std_error)


def test_empty_estimate() -> None:
    est = IntegralEstimate.from_samples(np.array([]))
    assert (est.value, est.std_error, est.n_paths) == (0.0, 0.0, 0)


def test_volterra_integral_edges(linear_problem: GenericStopProblem) -> None:
    tail = constant_boundary(0.5, n_steps=2, horizon_T=0.5)
    batch = MCConfig(n_paths=10).batch(tail.grid)

    at_horizon = volterra_integral(linear_problem, 0.3, 1.0, tail, batch)
    assert at_horizon.value == 0.0

    with pytest.raises(ValueError, match="nonnegative"):
        volterra_integral(linear_problem, -0.1, 0.5, tail, batch)


def test_volterra_integrand_decreases_in_start_level(
    linear_problem: GenericStopProblem,
) -> None:
    """Test a higher starting level never raises the integral."""
    tail = constant_boundary(0.5, n_steps=5, horizon_T=0.5)
    batch = MCConfig(seed=3, n_paths=1000).batch(tail.grid)
    F = VolterraIntegrand(linear_problem, 0.5, tail, batch)

    values = [F(x, level0=x).value for x in (0.5, 0.75, 1.0, 2.0)]
    assert values == sorted(values, reverse=True)
    assert values[0] > 0 > values[-1]


def test_volterra_integrand_rejects_grid_mismatch(
    linear_problem: GenericStopProblem,
) -> None:
    tail = constant_boundary(0.5, n_steps=5, horizon_T=0.5)
    batch = MCConfig(n_paths=10).batch(uniform_grid(0.5, 4))
    with pytest.raises(ValueError, match="does not match"):
        VolterraIntegrand(linear_problem, 0.5, tail, batch)


def test_policy_integral_stop_at_horizon(linear_problem: GenericStopProblem) -> None:
    """Test E X_T = 0 for the Figure-1 linear model."""
    batch = MCConfig(seed=5, n_paths=20_000).batch(uniform_grid(1.0, 20))
    est = policy_integral(linear_problem, fixed_time_rule(1.0), batch).scaled(
        linear_problem.payoff_scale
    )
    assert abs(est.value) <= const.SIGMA_TOL * est.std_error


def test_policy_integral_stop_at_half(linear_problem: GenericStopProblem) -> None:
    """Test E X_{T/2} = 0.25 for the Figure-1 linear model."""
    batch = MCConfig(seed=6, n_paths=20_000).batch(uniform_grid(1.0, 20))
    est = policy_integral(linear_problem, fixed_time_rule(0.5), batch).scaled(
        linear_problem.payoff_scale
    )
    assert abs(est.value - 0.25) <= const.SIGMA_TOL * est.std_error


def test_value_with_zero_boundary_is_stop_at_once(
    linear_problem: GenericStopProblem, geometric_problem: GenericStopProblem
) -> None:
    """Test a zero boundary stops immediately and earns the offset."""
    boundary = constant_boundary(0.0)
    batch = MCConfig(n_paths=100).batch(boundary.grid)

    linear = value_integral(linear_problem, boundary, batch)
    assert linear.value == 0.0

    geometric = value_integral(geometric_problem, boundary, batch).scaled(
        geometric_problem.payoff_scale, geometric_problem.payoff_offset
    )
    assert geometric.value == 1.0


def test_value_with_infinite_boundary_is_stop_at_horizon(
    linear_problem: GenericStopProblem,
) -> None:
    boundary = Boundary(uniform_grid(1.0, 20), np.full(21, np.inf))
    batch = MCConfig(seed=8, n_paths=20_000).batch(boundary.grid)
    est = value_integral(linear_problem, boundary, batch).scaled(2.0)

    assert abs(est.value) <= const.SIGMA_TOL * est.std_error


def test_value_is_thread_independent(linear_problem: GenericStopProblem) -> None:
    boundary = constant_boundary(0.8, n_steps=10)
    batch = MCConfig(seed=9, n_paths=5000, block_size=512).batch(boundary.grid)

    single = value_integral(linear_problem, boundary, batch, threads=1)
    pooled = value_integral(linear_problem, boundary, batch, threads=3)
    assert single == pooled


def test_volterra_integral_without_stopping_matches_closed_form(
    linear_problem: GenericStopProblem,
) -> None:
    """Test E psi_s = x + rho s gives (T-t)(f-x) - rho (T-t)^2 / 2 when a = inf."""
    t, x = 0.25, 0.3
    tail = Boundary(uniform_grid(0.75, 15), np.full(16, np.inf))
    batch = MCConfig(seed=12, n_paths=20_000).batch(tail.grid)

    est = volterra_integral(linear_problem, x, t, tail, batch)
    expected = 0.75 * (0.5 - x) - linear_problem.rho * 0.75**2 / 2.0
    assert abs(est.value - expected) <= const.SIGMA_TOL * est.std_error


@pytest.mark.parametrize("x", [0.1, 0.5, 3.0])
def test_volterra_integral_with_zero_boundary_is_zero(
    linear_problem: GenericStopProblem, x: float
) -> None:
    tail = constant_boundary(0.0, n_steps=8, horizon_T=0.5)
    batch = MCConfig(seed=14, n_paths=500).batch(tail.grid)

    est = volterra_integral(linear_problem, x, 0.5, tail, batch)
    assert est.value == 0.0
    assert est.std_error == 0.0
