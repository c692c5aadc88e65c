# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Domain types for the disorder model and the reduced stopping problem.

The observed process drifts at ``mu1 > 0`` until the disorder time and at
``mu2 < 0`` afterwards. Both payoffs (``E X_tau`` and
``E exp(X_tau - sigma^2 tau / 2)``) reduce to a generic problem for the
Shiryaev-Roberts statistic

    d psi = (rho + b psi) dt - mu psi dB,

maximizing ``E int_0^tau e^{lambda s} (f(s) - psi_s) ds`` over ``tau <= T``.
"""

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from disorderstop import const

GainFunction = Callable[[np.ndarray], np.ndarray]

# Relative slack when comparing rho against its upper limit (1 - g0) / T
_RHO_RTOL = 1e-12
# Leftover mass at T below this counts as no atom
ATOM_TOL = 1e-12
_GAIN_SAMPLES = 1001


class DomainError(ValueError):
    """A statistic conversion was requested outside its domain"""


class ProblemKind(str, enum.Enum):
    """The concrete stopping problems that reduce to the generic one."""

    LINEAR = const.LINEAR
    GEOMETRIC = const.GEOMETRIC
    LOG_UTILITY = const.LOG_UTILITY


class DisorderModel(BaseModel):
    """Parameters of the observed process with a drift change."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    mu1: float = Field(gt=0, allow_inf_nan=False)
    mu2: float = Field(lt=0, allow_inf_nan=False)
    sigma: float = Field(gt=0, allow_inf_nan=False)
    horizon_T: float = Field(gt=0, allow_inf_nan=False, alias="T")

    @property
    def snr(self) -> float:
        """Signal-to-noise ratio (mu1 - mu2) / sigma."""
        return (self.mu1 - self.mu2) / self.sigma


class UniformPrior(BaseModel):
    """Uniform law of the disorder time on [0, T] with atoms at 0 and T.

    G(t) = g0 + rho t on [0, T) and G(T) = 1, so any mass left over by the
    density sits at t = T.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    horizon_T: float = Field(gt=0, allow_inf_nan=False, alias="T")
    g0: float = Field(ge=0, lt=1, allow_inf_nan=False)
    rho: float = Field(gt=0, allow_inf_nan=False)

    @field_validator("rho")
    @classmethod
    def _rho_within_mass(cls, value: float, info: ValidationInfo) -> float:
        g0 = info.data.get("g0")
        horizon = info.data.get("horizon_T")
        if g0 is None or horizon is None:
            return value
        limit = (1.0 - g0) / horizon
        if value > limit * (1.0 + _RHO_RTOL):
            raise ValueError(f"density must not exceed (1 - g0) / T = {limit}")
        return value

    @property
    def atom_at_T(self) -> float:
        """Probability that no disorder happens before the horizon."""
        atom = 1.0 - self.g0 - self.rho * self.horizon_T
        return atom if atom > ATOM_TOL else 0.0

    @property
    def g_left_T(self) -> float:
        """G(T-), the distribution function just before the horizon."""
        return 1.0 - self.atom_at_T

    def cdf(self, t: ArrayLike) -> np.ndarray:
        """G(t), vectorized."""
        t_arr = np.asarray(t, dtype=float)
        inside = self.g0 + self.rho * np.clip(t_arr, 0.0, None)
        return np.where(t_arr >= self.horizon_T, 1.0, np.where(t_arr < 0, 0.0, inside))

    def mean_theta(self) -> float:
        """E theta in closed form."""
        return 0.5 * self.rho * self.horizon_T**2 + self.atom_at_T * self.horizon_T


@dataclass(frozen=True)
class AffineGain:
    """Gain function f(t) = intercept + slope * t.

    Evaluating at T returns the left limit f(T-), which is what the
    terminal boundary condition and the quadrature at the last node use.
    """

    intercept: float
    slope: float = 0.0

    def __call__(self, t: ArrayLike) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class GenericStopProblem:
    """Generic problem sup E int_0^tau e^{lam s} (f(s) - psi_s) ds.

    The concrete value is ``payoff_offset + payoff_scale * generic value``.
    ``gain_f`` may be any nonincreasing callable; the factories below only
    build affine ones.
    """

    lam: float
    b: float
    rho: float
    mu: float
    gain_f: GainFunction
    psi0: float
    payoff_scale: float
    payoff_offset: float
    horizon_T: float
    kind: Optional[ProblemKind] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if self.psi0 < 0:
            raise ValueError(f"psi0 must be nonnegative, got {self.psi0}")
        if self.payoff_scale <= 0:
            raise ValueError(f"payoff_scale must be positive, got {self.payoff_scale}")
        if self.horizon_T <= 0:
            raise ValueError(f"horizon must be positive, got {self.horizon_T}")
        sample = self.gain_f(
            np.linspace(0.0, self.horizon_T, _GAIN_SAMPLES, endpoint=False)
        )
        if np.any(np.diff(sample) > 0):
            raise ValueError("gain function must be nonincreasing on [0, T)")
        if np.any(sample <= 0):
            raise ValueError("gain function must be strictly positive on [0, T)")

    def gain_on(self, grid: np.ndarray) -> np.ndarray:
        """Gain at grid nodes, broadcast to the grid shape."""
        return np.broadcast_to(self.gain_f(grid), np.shape(grid)).astype(float)

    def terminal_gain(self) -> float:
        """f(T-)."""
        return float(self.gain_f(np.asarray(self.horizon_T)))

    def to_original(self, generic_value: float) -> float:
        """Map a generic value back to the concrete payoff."""
        return self.payoff_offset + self.payoff_scale * generic_value


@dataclass(frozen=True, eq=False)
class Boundary:
    """Boundary levels a(t_k) on a time grid.

    Between nodes the level of the left node applies.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("boundary grid needs at least two nodes")
        if grid.shape != values.shape:
            raise ValueError(
                f"grid has {grid.size} nodes but {values.size} levels were given"
            )
        if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("boundary grid must start at 0 and strictly increase")
        if np.any(np.isnan(values)) or np.any(values < 0):
            raise ValueError("boundary levels must be nonnegative numbers")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def horizon_T(self) -> float:
        return float(self.grid[-1])

    @property
    def n_steps(self) -> int:
        return self.grid.size - 1

    def level_at(self, t: ArrayLike) -> np.ndarray:
        """Piecewise-constant-left interpolation of the boundary."""
        idx = np.searchsorted(self.grid, np.asarray(t, dtype=float), side="right") - 1
        return self.values[np.clip(idx, 0, self.n_steps)]

    def shifted(self, offset: float) -> "Boundary":
        return Boundary(self.grid, np.clip(self.values + offset, 0.0, None))

    def scaled(self, factor: float) -> "Boundary":
        return Boundary(self.grid, self.values * factor)

    def invariant_violations(self, problem: GenericStopProblem) -> List[str]:
        """Describe every way this boundary breaks the solver's guarantees."""
        problems: List[str] = []
        if np.any(np.diff(self.values) > 0):
            problems.append("levels increase somewhere along the grid")
        gain = problem.gain_on(self.grid)
        below = np.flatnonzero(self.values[:-1] < gain[:-1])
        if below.size:
            problems.append(
                f"level below the gain at t={self.grid[below[0]]} "
                f"({below.size} node(s))"
            )
        if not np.isclose(self.values[-1], problem.terminal_gain(), atol=1e-12):
            problems.append(
                f"terminal level {self.values[-1]} differs from f(T-)="
                f"{problem.terminal_gain()}"
            )
        return problems


def make_linear_problem(
    model: DisorderModel, prior: UniformPrior, density_weighted: bool = False
) -> GenericStopProblem:
    """Reduce sup E X_tau to the generic problem under the reference measure
    where (X_t - mu1 t) / sigma is a standard Brownian motion.

    By default the gain rate is mu1 - (mu1 - mu2) psi, which treats E tau as
    unchanged by the measure change. That holds for deterministic stop times
    only. With ``density_weighted`` the pre-disorder drift is weighted by
    the likelihood ratio psi + 1 - G(s), giving the rate
    mu1 (1 - G(s)) + mu2 psi, which matches E X_tau for every stop rule.
    """
    if density_weighted:
        ratio = model.mu1 / abs(model.mu2)
        gain: GainFunction = AffineGain(ratio * (1.0 - prior.g0), -ratio * prior.rho)
        scale = abs(model.mu2)
    else:
        scale = model.mu1 - model.mu2
        gain = AffineGain(model.mu1 / scale)
    return GenericStopProblem(
        lam=0.0,
        b=0.0,
        rho=prior.rho,
        mu=model.snr,
        gain_f=gain,
        psi0=prior.g0,
        payoff_scale=scale,
        payoff_offset=0.0,
        horizon_T=model.horizon_T,
        kind=ProblemKind.LINEAR,
    )


def make_geometric_problem(
    model: DisorderModel, prior: UniformPrior
) -> GenericStopProblem:
    """Reduce sup E exp(X_tau - sigma^2 tau / 2) to the generic problem.

    Under the reference measure (X_t - mu1 t) / sigma - sigma t is a standard
    Brownian motion, which adds the linear drift -(mu1 - mu2) psi.
    """
    ratio = model.mu1 / abs(model.mu2)
    return GenericStopProblem(
        lam=model.mu1,
        b=-(model.mu1 - model.mu2),
        rho=prior.rho,
        mu=model.snr,
        gain_f=AffineGain(ratio * (1.0 - prior.g0), -ratio * prior.rho),
        psi0=prior.g0,
        payoff_scale=abs(model.mu2),
        payoff_offset=1.0,
        horizon_T=model.horizon_T,
        kind=ProblemKind.GEOMETRIC,
    )


def log_utility_model(model: DisorderModel) -> DisorderModel:
    """Drifts of log S for a trader maximizing E log S_tau.

    Maximizing E log S_tau is the linear problem with both drifts lowered
    by sigma^2 / 2; the shifted pre-disorder drift must stay positive.
    """
    shift = 0.5 * model.sigma**2
    if model.mu1 <= shift:
        raise ValueError(
            f"mu1={model.mu1} must exceed sigma^2/2={shift} for the log-utility problem"
        )
    return DisorderModel(
        mu1=model.mu1 - shift,
        mu2=model.mu2 - shift,
        sigma=model.sigma,
        horizon_T=model.horizon_T,
    )


def make_log_utility_problem(
    model: DisorderModel, prior: UniformPrior, density_weighted: bool = False
) -> GenericStopProblem:
    problem = make_linear_problem(log_utility_model(model), prior, density_weighted)
    return dataclasses.replace(problem, kind=ProblemKind.LOG_UTILITY)


def make_problem(
    kind: Union[ProblemKind, str],
    model: DisorderModel,
    prior: UniformPrior,
    density_weighted: bool = False,
) -> GenericStopProblem:
    """Dispatch on the problem kind.

    ``density_weighted`` selects the weighted gain of the linear and
    log-utility reductions; the geometric reduction has only one form.
    """
    kind = ProblemKind(kind)
    if kind is ProblemKind.LINEAR:
        return make_linear_problem(model, prior, density_weighted)
    if kind is ProblemKind.GEOMETRIC:
        return make_geometric_problem(model, prior)
    return make_log_utility_problem(model, prior, density_weighted)


def psi_from_pi(pi: ArrayLike, g_t: ArrayLike) -> np.ndarray:
    """Shiryaev-Roberts statistic from the posterior probability of disorder."""
    pi_arr = np.asarray(pi, dtype=float)
    if np.any(pi_arr >= 1) or np.any(pi_arr < 0):
        raise DomainError("posterior probability must lie in [0, 1)")
    return pi_arr * (1.0 - np.asarray(g_t, dtype=float)) / (1.0 - pi_arr)


def pi_from_psi(psi: ArrayLike, g_t: ArrayLike) -> np.ndarray:
    """Posterior probability of disorder from the Shiryaev-Roberts statistic."""
    psi_arr = np.asarray(psi, dtype=float)
    g_arr = np.asarray(g_t, dtype=float)
    if np.any(psi_arr < 0):
        raise DomainError("statistic must be nonnegative")
    denominator = psi_arr + 1.0 - g_arr
    if np.any(denominator <= 0):
        raise DomainError("posterior is undefined for psi = 0 once G(t) = 1")
    return psi_arr / denominator


def sample_theta(
    prior: UniformPrior, rng: np.random.Generator, size: Optional[int] = None
) -> np.ndarray:
    """Draw disorder times by inverting G."""
    u = rng.random(size)
    inside = prior.g_left_T
    return np.where(
        u < prior.g0,
        0.0,
        np.where(u < inside, (u - prior.g0) / prior.rho, prior.horizon_T),
    )
