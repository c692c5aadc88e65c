# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Backward induction for the optimal stopping boundary.

The boundary is found node by node from the horizon backwards: a(t_n) is
the terminal gain f(T-), and each a(t_k) is the zero in x of the Monte
Carlo estimate F_k(x) of the boundary equation, which only involves the
already solved levels a(t_{k+1}), ..., a(t_n).
"""

import csv
import logging
import math
import pathlib
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from disorderstop import const
from disorderstop.expectation import IntegralEstimate, MCConfig, VolterraIntegrand
from disorderstop.model import Boundary, GenericStopProblem, UniformPrior
from disorderstop.simulate import PsiPath


logger = logging.getLogger(__name__)

# Stream keys separating the solver's batches from the residual check's
_SOLVE_STREAM = 0
_RESIDUAL_STREAM = 1


class SolverError(Exception):
    """The boundary equation could not be solved"""


class BracketError(SolverError):
    """No sign change of F_k was found on the expanded bracket"""

    def __init__(self, t_k: float, f_lo: float, f_hi: float) -> None:
        self.t_k = t_k
        self.f_lo = f_lo
        self.f_hi = f_hi
        super().__init__(
            f"No root bracket at t_k={t_k}: F(lo)={f_lo:.6g}, F(hi)={f_hi:.6g}"
        )


class BoundaryFormatError(Exception):
    """A boundary file is malformed or does not fit the requested grid"""


def terminal_value(problem: GenericStopProblem) -> float:
    """a(T) = f(T-)."""
    return problem.terminal_gain()


def _tail(grid: np.ndarray, values: np.ndarray, k: int) -> Boundary:
    """Boundary on the shifted grid [0, T - t_k]; the level at s=0 is a
    placeholder replaced by each candidate."""
    levels = values[k:].copy()
    levels[0] = levels[1]
    return Boundary(grid[k:] - grid[k], levels)


def _find_root(
    F: VolterraIntegrand, lo: float, a_next: float, t_k: float, mc: MCConfig
) -> Tuple[float, bool]:
    """Zero of F on [lo, inf). Returns the root and whether it was clamped to lo."""
    f_lo = F(lo, level0=lo)
    if f_lo.value <= 0:
        return lo, True

    hi = max(a_next, lo) + 1.0
    f_hi = F(hi, level0=hi)
    doublings = 0
    while f_hi.value >= 0:
        if doublings == const.MAX_DOUBLINGS:
            raise BracketError(t_k, f_lo.value, f_hi.value)
        hi *= 2.0
        doublings += 1
        f_hi = F(hi, level0=hi)
    if doublings:
        logger.debug(f"Expanded bracket at t_k={t_k} to {hi} in {doublings} step(s)")

    xs = np.linspace(lo, hi, const.SCAN_POINTS)
    fs = np.array([f_lo.value] + [F(x, level0=x).value for x in xs[1:-1]] + [f_hi.value])
    changes = np.flatnonzero((fs[:-1] > 0) & (fs[1:] <= 0))
    if changes.size > 1:
        logger.warning(
            f"F is not monotone at t_k={t_k}: {changes.size} sign changes on "
            f"[{lo:.6g}, {hi:.6g}], scan={np.array2string(fs, precision=4)}; "
            "taking the largest"
        )
    left, right = xs[changes[-1]], xs[changes[-1] + 1]

    while right - left > mc.tol:
        mid = 0.5 * (left + right)
        est = F(mid, level0=mid)
        if mc.noise_floor_stop and abs(est.value) < est.std_error:
            return mid, False
        if est.value > 0:
            left = mid
        else:
            right = mid
    return 0.5 * (left + right), False


def solve_boundary(
    problem: GenericStopProblem,
    grid: ArrayLike,
    mc_config: MCConfig,
    scaled: bool = False,
) -> Boundary:
    """Solve the boundary equation by backward induction on ``grid``.

    Args:
        problem: Generic stopping problem.
        grid: Nodes 0 = t_0 < ... < t_n = T.
        mc_config: Monte Carlo settings; node k uses its own substream.
        scaled: Multiply the integrand by the payoff scale, i.e. solve the
            concrete equation instead of the generic one.

    Returns:
        The solved boundary.

    Raises:
        BracketError: if F_k keeps its sign on the whole expanded bracket.
    """
    grid = np.asarray(grid, dtype=float)
    if not np.isclose(grid[-1], problem.horizon_T):
        raise ValueError(f"grid ends at {grid[-1]}, horizon is {problem.horizon_T}")
    n = grid.size - 1
    gain = problem.gain_on(grid)
    values = np.empty(n + 1)
    values[n] = terminal_value(problem)
    master = mc_config.batch(grid, stream=(_SOLVE_STREAM,))
    scale = problem.payoff_scale if scaled else 1.0
    clamps = 0

    for k in range(n - 1, -1, -1):
        tail = _tail(grid, values, k)
        batch = master.sub_batch(k, grid=tail.grid)
        F = VolterraIntegrand(problem, grid[k], tail, batch, mc_config.threads, scale)
        lo = max(gain[k], values[k + 1], 0.0)
        root, clamped = _find_root(F, lo, values[k + 1], grid[k], mc_config)
        if clamped:
            clamps += 1
            logger.debug(f"Clamped a(t_k={grid[k]}) to the lower bracket {lo}")
        values[k] = 0.0 if root < const.ZERO_ROOT_TOL else root
        logger.debug(f"a({grid[k]:.6g}) = {values[k]:.6g}")

    if clamps:
        logger.warning(f"{clamps} of {n} node(s) clamped to keep the boundary monotone")
    return Boundary(grid, values)


def stop_indices(levels: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """First node where psi >= a, or the last node if there is none."""
    psi = np.atleast_2d(psi)
    crossed = psi >= levels
    first = np.argmax(crossed, axis=1)
    return np.where(crossed.any(axis=1), first, psi.shape[1] - 1)


def stop_time_on_path(boundary: Boundary, psi_path: PsiPath) -> Tuple[int, bool]:
    """Stop index on one path and whether the stop happens at T."""
    if psi_path.values.shape != boundary.values.shape:
        raise ValueError("path and boundary do not share a grid")
    index = int(stop_indices(boundary.values, psi_path.values)[0])
    return index, index == boundary.n_steps


@dataclass(frozen=True)
class Residuals:
    """F_k evaluated at the solved levels a(t_k), k < n.

    ``std_errors`` combine the fresh estimate's error with the error of the
    same equation on the solver's batch, since the solver only pins F_k to
    zero up to its own noise.
    """

    grid: np.ndarray
    values: np.ndarray
    std_errors: np.ndarray

    @property
    def within_fraction(self) -> float:
        """Share of nodes with |F_k| <= 3 standard errors."""
        ok = np.abs(self.values) <= const.SIGMA_TOL * self.std_errors
        return float(np.mean(ok)) if ok.size else 1.0


def boundary_residuals(
    problem: GenericStopProblem, boundary: Boundary, mc_config: MCConfig
) -> Residuals:
    """Plug the boundary back into its equation on fresh paths.

    Each node is also evaluated on the batch :func:`solve_boundary` uses
    for it under ``mc_config``, whose standard error enters the tolerance.
    """
    fresh = mc_config.batch(boundary.grid, stream=(_RESIDUAL_STREAM,))
    solver = mc_config.batch(boundary.grid, stream=(_SOLVE_STREAM,))
    estimates: List[Tuple[IntegralEstimate, IntegralEstimate]] = []
    for k in range(boundary.n_steps):
        tail = Boundary(boundary.grid[k:] - boundary.grid[k], boundary.values[k:])
        t_k, a_k = boundary.grid[k], boundary.values[k]
        check, solved = (
            VolterraIntegrand(
                problem, t_k, tail, master.sub_batch(k, grid=tail.grid), mc_config.threads
            )(a_k)
            for master in (fresh, solver)
        )
        estimates.append((check, solved))
    return Residuals(
        grid=boundary.grid[:-1],
        values=np.array([check.value for check, _ in estimates]),
        std_errors=np.array(
            [math.hypot(check.std_error, solved.std_error) for check, solved in estimates]
        ),
    )


@dataclass(frozen=True)
class RefinementReport:
    """Coarse boundary against the doubled grid at matching nodes."""

    coarse: Boundary
    fine: Boundary
    max_difference: float
    threshold: float

    @property
    def stable(self) -> bool:
        return self.max_difference <= self.threshold


def grid_refinement_report(
    problem: GenericStopProblem,
    n_steps: int,
    mc_config: MCConfig,
    threshold: float = 0.05,
) -> RefinementReport:
    """Solve on n and 2n steps with the same seed and compare."""
    coarse = solve_boundary(
        problem, np.linspace(0.0, problem.horizon_T, n_steps + 1), mc_config
    )
    fine = solve_boundary(
        problem, np.linspace(0.0, problem.horizon_T, 2 * n_steps + 1), mc_config
    )
    difference = float(np.max(np.abs(fine.values[::2] - coarse.values)))
    logger.info(f"Grid refinement {n_steps} -> {2 * n_steps}: max |diff| = {difference:.4g}")
    return RefinementReport(coarse, fine, difference, threshold)


def posterior_boundary(boundary: Boundary, prior: UniformPrior) -> np.ndarray:
    """Boundary in units of the posterior probability of disorder.

    Uses pi = a / (a + 1 - G(t)) with G(T-) at the last node; a zero level
    against zero remaining mass maps to 0, i.e. always stop.
    """
    g = prior.cdf(boundary.grid)
    g[-1] = prior.g_left_T
    denominator = boundary.values + 1.0 - g
    with np.errstate(invalid="ignore", divide="ignore"):
        levels = np.where(denominator > 0, boundary.values / denominator, 0.0)
    return np.where(np.isinf(boundary.values), 1.0, levels)


def write_boundary_csv(
    boundary: Boundary,
    file_path: pathlib.Path,
    posterior: Optional[np.ndarray] = None,
) -> None:
    """Write ``t,a`` rows with round-trip exact floats."""
    fieldnames = [const.CSV_TIME, const.CSV_LEVEL]
    if posterior is not None:
        fieldnames.append(const.CSV_POSTERIOR)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with file_path.open("w", newline="") as out:
        writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for k, (t, a) in enumerate(zip(boundary.grid, boundary.values)):
            row = {const.CSV_TIME: repr(float(t)), const.CSV_LEVEL: repr(float(a))}
            if posterior is not None:
                row[const.CSV_POSTERIOR] = repr(float(posterior[k]))
            writer.writerow(row)


def read_boundary_csv(file_path: pathlib.Path) -> Boundary:
    """Load a boundary written by :func:`write_boundary_csv`."""
    try:
        with file_path.open("r", newline="") as source:
            reader = csv.DictReader(source)
            fields = reader.fieldnames or []
            if const.CSV_TIME not in fields or const.CSV_LEVEL not in fields:
                raise BoundaryFormatError(
                    f"{file_path} must have columns "
                    f"'{const.CSV_TIME}' and '{const.CSV_LEVEL}', found {fields}"
                )
            rows = [(float(r[const.CSV_TIME]), float(r[const.CSV_LEVEL])) for r in reader]
        grid, values = (np.array(col) for col in zip(*rows)) if rows else ([], [])
        return Boundary(np.asarray(grid), np.asarray(values))
    except FileNotFoundError:
        raise BoundaryFormatError(f"Boundary file {file_path} does not exist")
    except (ValueError, TypeError) as ex:
        raise BoundaryFormatError(f"Malformed boundary file {file_path}: {ex}")


def check_grid(boundary: Boundary, problem: GenericStopProblem) -> None:
    """Reject a boundary whose grid does not end at the problem horizon."""
    if not np.isclose(boundary.horizon_T, problem.horizon_T):
        raise BoundaryFormatError(
            f"Boundary ends at t={boundary.horizon_T}, "
            f"but the configured horizon is T={problem.horizon_T}"
        )
