# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Path simulation for the Shiryaev-Roberts statistic and the raw model.

Paths of psi are produced by the exact variation-of-constants solution of

    d psi = (rho + b psi) dt - mu psi dB,

    psi_t = Phi_t (x + rho int_0^t Phi_s^{-1} ds),
    Phi_t = exp((b - mu^2 / 2) t - mu B_t),

with the inner integral taken by the trapezoidal rule on the grid. The
scheme keeps psi positive whenever rho > 0.

Random increments come from a :class:`PathBatch`. Paths are generated in
fixed-size blocks, each with its own ``SeedSequence`` substream keyed by
(seed, stream, block index), so a batch is reproducible bit for bit and
does not depend on how many threads consume it.
"""

import csv
import logging
import os
import pathlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import cumulative_trapezoid

from disorderstop import const
from disorderstop.model import (
    DisorderModel,
    GenericStopProblem,
    UniformPrior,
    make_linear_problem,
)


logger = logging.getLogger(__name__)

R = TypeVar("R")


class SimulationError(Exception):
    """Too many simulated paths left the floating-point range"""


def uniform_grid(horizon_T: float, n_steps: int) -> np.ndarray:
    """Equally spaced grid 0 = t_0 < ... < t_n = T."""
    if n_steps < 1:
        raise ValueError(f"grid needs at least one step, got {n_steps}")
    return np.linspace(0.0, horizon_T, n_steps + 1)


def resolve_threads(threads: int) -> int:
    """Map the ``0 = auto`` convention to a worker count."""
    if threads < 0:
        raise ValueError(f"thread count must be nonnegative, got {threads}")
    return threads or (os.cpu_count() or 1)


def parallel_map(fn: Callable[[int], R], items: Sequence[int], threads: int = 1) -> List[R]:
    """Map over items on a thread pool, results in item order."""
    workers = resolve_threads(threads)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True, eq=False)
class PathBatch:
    """A reproducible ensemble of Brownian increments on a grid.

    Args:
        seed: Master seed.
        n_paths: Number of paths.
        grid: Time grid, strictly increasing.
        stream: Extra key separating independent batches under one seed.
        block_size: Paths per substream.
    """

    seed: int
    n_paths: int
    grid: np.ndarray
    stream: Tuple[int, ...] = ()
    block_size: int = const.BLOCK_SIZE

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("path grid must be 1-D and strictly increasing")
        if self.n_paths < 0:
            raise ValueError(f"n_paths must be nonnegative, got {self.n_paths}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be positive, got {self.block_size}")
        object.__setattr__(self, "grid", grid)

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.grid)

    @property
    def n_steps(self) -> int:
        return self.grid.size - 1

    @property
    def n_blocks(self) -> int:
        return -(-self.n_paths // self.block_size)

    def block_slice(self, block: int) -> slice:
        start = block * self.block_size
        return slice(start, min(start + self.block_size, self.n_paths))

    def block_size_of(self, block: int) -> int:
        span = self.block_slice(block)
        return span.stop - span.start

    def block_rng(self, block: int, *purpose: int) -> np.random.Generator:
        """Generator of one block; ``purpose`` keys extra independent draws."""
        seq = np.random.SeedSequence(self.seed, spawn_key=self.stream + (block,) + purpose)
        return np.random.default_rng(seq)

    def block_increments(self, block: int) -> np.ndarray:
        """Increments of one block, shape (paths in block, n_steps)."""
        span = self.block_slice(block)
        rng = self.block_rng(block)
        normals = rng.standard_normal((span.stop - span.start, self.n_steps))
        return normals * np.sqrt(self.dt)

    def increments(self) -> np.ndarray:
        """All increments, shape (n_paths, n_steps)."""
        if self.n_paths == 0:
            return np.empty((0, self.n_steps))
        return np.concatenate([self.block_increments(b) for b in range(self.n_blocks)])

    def sub_batch(
        self,
        key: int,
        grid: Optional[np.ndarray] = None,
        n_paths: Optional[int] = None,
    ) -> "PathBatch":
        """An independent batch derived deterministically from this one."""
        return PathBatch(
            seed=self.seed,
            n_paths=self.n_paths if n_paths is None else n_paths,
            grid=self.grid if grid is None else grid,
            stream=self.stream + (key,),
            block_size=self.block_size,
        )

    def map_blocks(
        self, fn: Callable[[np.ndarray], R], threads: int = 1
    ) -> List[R]:
        """Apply ``fn`` to every block's increments, results in block order."""
        return parallel_map(
            lambda block: fn(self.block_increments(block)), range(self.n_blocks), threads
        )


@dataclass(frozen=True, eq=False)
class PsiPath:
    """One path of the statistic on a grid."""

    grid: np.ndarray
    values: np.ndarray
    valid: bool = True


@dataclass(frozen=True, eq=False)
class PsiBatch:
    """Simulated paths that stayed finite, plus the count of dropped ones."""

    grid: np.ndarray
    values: np.ndarray
    path_ids: np.ndarray
    dropped: int = 0

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, index: int) -> PsiPath:
        return PsiPath(self.grid, self.values[index])

    def __iter__(self) -> Iterator[PsiPath]:
        return (self[i] for i in range(len(self)))


def exact_factors(
    problem: GenericStopProblem, grid: np.ndarray, increments: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Split the exact solution as psi = x * phi + carry.

    Both factors depend only on the noise, so a batch can be evaluated for
    many starting levels x at the cost of one multiply-add each.
    Non-finite entries mark overflowing paths.
    """
    increments = np.atleast_2d(increments)
    brownian = np.zeros((increments.shape[0], grid.size))
    np.cumsum(increments, axis=1, out=brownian[:, 1:])
    log_phi = (problem.b - 0.5 * problem.mu**2) * grid - problem.mu * brownian
    with np.errstate(over="ignore", invalid="ignore"):
        phi = np.exp(log_phi)
        integral = cumulative_trapezoid(np.exp(-log_phi), grid, axis=1, initial=0.0)
        carry = problem.rho * phi * integral
    return phi, carry


def finite_rows(*arrays: np.ndarray) -> np.ndarray:
    """Mask of rows that are finite in every array."""
    mask = np.ones(arrays[0].shape[0], dtype=bool)
    for arr in arrays:
        mask &= np.isfinite(arr).all(axis=1)
    return mask


def check_drop_rate(dropped: int, total: int) -> None:
    """Fail when more paths overflowed than the run tolerates."""
    if dropped == 0 or total == 0:
        return
    fraction = dropped / total
    logger.warning(f"Dropped {dropped} of {total} paths after overflow")
    if fraction > const.MAX_DROP_FRACTION:
        raise SimulationError(
            f"{dropped} of {total} paths overflowed "
            f"({fraction:.3%} > {const.MAX_DROP_FRACTION:.2%})"
        )


def psi_path_exact(
    problem: GenericStopProblem,
    x0: float,
    increments: ArrayLike,
    grid: np.ndarray,
) -> PsiPath:
    """Exact-scheme path of psi started at ``x0``."""
    phi, carry = exact_factors(problem, grid, np.asarray(increments, dtype=float))
    with np.errstate(invalid="ignore"):
        values = (x0 * phi + carry)[0]
    return PsiPath(grid, values, valid=bool(np.isfinite(values).all()))


def psi_path_euler(
    problem: GenericStopProblem,
    x0: float,
    increments: ArrayLike,
    grid: np.ndarray,
) -> np.ndarray:
    """Euler-Maruyama paths of psi, one row per row of ``increments``."""
    increments = np.atleast_2d(np.asarray(increments, dtype=float))
    dt = np.diff(grid)
    psi = np.empty((increments.shape[0], grid.size))
    psi[:, 0] = x0
    for k in range(grid.size - 1):
        drift = problem.rho + problem.b * psi[:, k]
        psi[:, k + 1] = psi[:, k] + drift * dt[k] - problem.mu * psi[:, k] * increments[:, k]
    return psi


def simulate_batch(
    problem: GenericStopProblem, x0: float, batch: PathBatch, threads: int = 1
) -> PsiBatch:
    """Simulate every path of ``batch`` from ``x0``."""
    grid = batch.grid

    def run(increments: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        phi, carry = exact_factors(problem, grid, increments)
        with np.errstate(invalid="ignore"):
            psi = x0 * phi + carry
        return psi, finite_rows(psi)

    if batch.n_paths == 0:
        return PsiBatch(grid, np.empty((0, grid.size)), np.empty(0, dtype=int))

    results = batch.map_blocks(run, threads)
    psi = np.concatenate([r[0] for r in results])
    keep = np.concatenate([r[1] for r in results])
    dropped = int(np.count_nonzero(~keep))
    check_drop_rate(dropped, batch.n_paths)
    return PsiBatch(grid, psi[keep], np.flatnonzero(keep), dropped)


def simulate_disorder_path(
    model: DisorderModel,
    theta: ArrayLike,
    increments: ArrayLike,
    grid: np.ndarray,
) -> np.ndarray:
    """Observed X_t = mu1 t + (mu2 - mu1)(t - theta)^+ + sigma B_t on the grid.

    The drift is integrated in closed form, so the step containing theta
    is split exactly at theta. ``theta`` may hold one time per path.
    """
    increments = np.asarray(increments, dtype=float)
    squeeze = increments.ndim == 1
    increments = np.atleast_2d(increments)
    theta_col = np.reshape(np.asarray(theta, dtype=float), (-1, 1))
    brownian = np.zeros((increments.shape[0], grid.size))
    np.cumsum(increments, axis=1, out=brownian[:, 1:])
    after = np.clip(grid - theta_col, 0.0, None)
    observed = model.mu1 * grid + (model.mu2 - model.mu1) * after + model.sigma * brownian
    return observed[0] if squeeze else observed


def psi_from_observed(
    model: DisorderModel,
    prior: UniformPrior,
    observed: np.ndarray,
    grid: np.ndarray,
) -> np.ndarray:
    """Statistic paths computed from observed paths, one row per path."""
    observed = np.atleast_2d(observed)
    normalized = (observed - model.mu1 * grid) / model.sigma
    phi, carry = exact_factors(
        make_linear_problem(model, prior), grid, np.diff(normalized, axis=1)
    )
    with np.errstate(invalid="ignore"):
        return prior.g0 * phi + carry


def psi_from_observation(
    model: DisorderModel,
    prior: UniformPrior,
    observed: ArrayLike,
    grid: np.ndarray,
) -> PsiPath:
    """Statistic path built from one observed path X."""
    values = psi_from_observed(model, prior, np.asarray(observed, dtype=float), grid)[0]
    return PsiPath(grid, values, valid=bool(np.isfinite(values).all()))


def dump_paths_csv(paths: PsiBatch, file_path: pathlib.Path) -> None:
    """Write paths as rows of path_id,t,psi for debugging."""
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with file_path.open("w", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["path_id", "t", "psi"])
        for path_id, values in zip(paths.path_ids, paths.values):
            for t, psi in zip(paths.grid, values):
                writer.writerow([int(path_id), repr(float(t)), repr(float(psi))])
