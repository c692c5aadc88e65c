# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Monte Carlo estimates of the integrals behind the boundary equations.

Every estimate here is an average over paths of a per-path time integral

    int_0^{T-t} e^{lam s} (f(t+s) - psi_s) 1{psi_s < a(t+s)} ds,

taken by the trapezoidal rule through the integrand's values at the grid
nodes. Standard errors come from the per-path integrals, which are i.i.d.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from disorderstop import const
from disorderstop.model import Boundary, GenericStopProblem
from disorderstop.simulate import (
    PathBatch,
    check_drop_rate,
    exact_factors,
    finite_rows,
)


logger = logging.getLogger(__name__)

# Stop rule on a block of psi paths: returns the stop index of every row
StopRule = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MCConfig:
    """Monte Carlo settings shared by the solver and the estimators.

    Args:
        seed: Master seed; every batch is derived from it.
        n_paths: Paths per estimate.
        threads: Worker threads, 0 picks the CPU count.
        tol: Bisection tolerance on the boundary level.
        noise_floor_stop: End bisection once |F| drops below one std error.
    """

    seed: int = const.DEFAULT_SEED
    n_paths: int = const.DEFAULT_SOLVE_PATHS
    threads: int = 1
    tol: float = const.BISECTION_TOL
    noise_floor_stop: bool = True
    block_size: int = const.BLOCK_SIZE

    def batch(self, grid: np.ndarray, stream: Tuple[int, ...] = ()) -> PathBatch:
        return PathBatch(
            seed=self.seed,
            n_paths=self.n_paths,
            grid=grid,
            stream=stream,
            block_size=self.block_size,
        )


@dataclass(frozen=True)
class IntegralEstimate:
    """Sample mean of per-path integrals with its standard error."""

    value: float
    std_error: float
    n_paths: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "IntegralEstimate":
        n = samples.size
        if n == 0:
            return cls(0.0, 0.0, 0)
        std_error = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(float(np.mean(samples)), std_error, n)

    def scaled(self, scale: float, offset: float = 0.0) -> "IntegralEstimate":
        return IntegralEstimate(
            offset + scale * self.value, abs(scale) * self.std_error, self.n_paths
        )


def _integrand(
    problem: GenericStopProblem,
    t: float,
    s_grid: np.ndarray,
    psi: np.ndarray,
    levels: np.ndarray,
) -> np.ndarray:
    """e^{lam s} (f(t+s) - psi_s) 1{psi_s < a(t+s)} at the nodes."""
    discount = np.exp(problem.lam * s_grid)
    gain = problem.gain_on(t + s_grid)
    return np.where(psi < levels, discount * (gain - psi), 0.0)


class VolterraIntegrand:
    """F(x) = E_x int_0^{T-t} e^{lam s}(f(t+s) - psi_s) 1{psi_s < a(t+s)} ds.

    The noise factors are computed once, so every candidate level x reuses
    the same increments. At s = 0 the process sits at x and the start node
    counts as continuation when x <= a(t), with a(t) given by ``level0``
    (defaulting to the tail's first level).
    """

    def __init__(
        self,
        problem: GenericStopProblem,
        t: float,
        tail: Boundary,
        batch: PathBatch,
        threads: int = 1,
        scale: float = 1.0,
    ) -> None:
        if not np.allclose(batch.grid, tail.grid, rtol=0.0, atol=1e-12):
            raise ValueError("batch grid does not match the boundary tail grid")
        self.problem = problem
        self.t = t
        self.tail = tail
        self.scale = scale

        def factors(increments: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            return exact_factors(problem, tail.grid, increments)

        blocks = batch.map_blocks(factors, threads)
        if blocks:
            phi = np.concatenate([b[0] for b in blocks])
            carry = np.concatenate([b[1] for b in blocks])
        else:
            phi = carry = np.empty((0, tail.grid.size))
        keep = finite_rows(phi, carry)
        check_drop_rate(int(np.count_nonzero(~keep)), batch.n_paths)
        self._phi = phi[keep]
        self._carry = carry[keep]
        self._discount = np.exp(problem.lam * tail.grid)
        self._gain = problem.gain_on(t + tail.grid) * self._discount

    def samples(self, x: float, level0: Optional[float] = None) -> np.ndarray:
        """Per-path integrals for the starting level ``x``."""
        psi = x * self._phi + self._carry
        inside = psi[:, 1:] < self.tail.values[1:]
        start = x <= (self.tail.values[0] if level0 is None else level0)
        integrand = np.empty_like(psi)
        integrand[:, 0] = (self._gain[0] - x) if start else 0.0
        integrand[:, 1:] = np.where(
            inside, self._gain[1:] - self._discount[1:] * psi[:, 1:], 0.0
        )
        return self.scale * trapezoid(integrand, self.tail.grid, axis=1)

    def __call__(self, x: float, level0: Optional[float] = None) -> IntegralEstimate:
        return IntegralEstimate.from_samples(self.samples(x, level0))


def volterra_integral(
    problem: GenericStopProblem,
    x: float,
    t: float,
    boundary_tail: Boundary,
    batch: PathBatch,
    threads: int = 1,
) -> IntegralEstimate:
    """Left-hand side of the boundary equation at time ``t`` from level ``x``.

    ``boundary_tail`` holds a(t + s) on the shifted grid s in [0, T - t] and
    ``batch`` must share that grid.
    """
    if x < 0:
        raise ValueError(f"starting level must be nonnegative, got {x}")
    if t >= problem.horizon_T:
        return IntegralEstimate(0.0, 0.0, batch.n_paths)
    return VolterraIntegrand(problem, t, boundary_tail, batch, threads)(x)


def value_integral(
    problem: GenericStopProblem,
    boundary: Boundary,
    batch: PathBatch,
    threads: int = 1,
) -> IntegralEstimate:
    """Generic value int_0^T E[e^{lam s}(f(s) - psi_s) 1{psi_s < a(s)}] ds.

    The integrand is taken with (f - psi); map it to the concrete payoff
    with ``IntegralEstimate.scaled(problem.payoff_scale, problem.payoff_offset)``.
    """
    if not np.allclose(batch.grid, boundary.grid, rtol=0.0, atol=1e-12):
        raise ValueError("batch grid does not match the boundary grid")
    grid = boundary.grid

    def run(increments: np.ndarray) -> np.ndarray:
        phi, carry = exact_factors(problem, grid, increments)
        with np.errstate(invalid="ignore"):
            psi = problem.psi0 * phi + carry
        integrand = _integrand(problem, 0.0, grid, psi, boundary.values)
        samples = trapezoid(integrand, grid, axis=1)
        return np.where(finite_rows(psi), samples, np.nan)

    return _collect(batch.map_blocks(run, threads), batch.n_paths)


def policy_integral(
    problem: GenericStopProblem,
    rule: StopRule,
    batch: PathBatch,
    threads: int = 1,
) -> IntegralEstimate:
    """Generic payoff E int_0^tau e^{lam s}(f(s) - psi_s) ds of a stop rule.

    ``rule`` receives the grid and a block of psi paths and returns each
    path's stop index; the integral runs up to that node.
    """
    grid = batch.grid

    def run(increments: np.ndarray) -> np.ndarray:
        phi, carry = exact_factors(problem, grid, increments)
        with np.errstate(invalid="ignore"):
            psi = problem.psi0 * phi + carry
        discount = np.exp(problem.lam * grid)
        integrand = discount * (problem.gain_on(grid) - psi)
        running = cumulative_trapezoid(integrand, grid, axis=1, initial=0.0)
        keep = finite_rows(psi)
        stops = rule(grid, np.where(keep[:, None], psi, 0.0))
        samples = np.take_along_axis(running, stops[:, None], axis=1)[:, 0]
        return np.where(keep, samples, np.nan)

    return _collect(batch.map_blocks(run, threads), batch.n_paths)


def _collect(parts: List[np.ndarray], n_paths: int) -> IntegralEstimate:
    if not parts:
        return IntegralEstimate(0.0, 0.0, 0)
    samples = np.concatenate(parts)
    keep = np.isfinite(samples)
    check_drop_rate(int(np.count_nonzero(~keep)), n_paths)
    return IntegralEstimate.from_samples(samples[keep])
