# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Brute-force checks against the raw disorder model.

The raw model is simulated directly: draw theta from the prior, build the
observed path X, compute psi from X and apply a stop rule. Payoffs obtained
this way do not use any change of measure, so they are an independent
reference for the reduced problem solved in :mod:`disorderstop.boundary`.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from disorderstop import const
from disorderstop.boundary import boundary_residuals, solve_boundary, stop_indices
from disorderstop.expectation import (
    IntegralEstimate,
    MCConfig,
    StopRule,
    policy_integral,
    value_integral,
)
from disorderstop.model import (
    Boundary,
    DisorderModel,
    ProblemKind,
    UniformPrior,
    log_utility_model,
    make_problem,
    sample_theta,
)
from disorderstop.reporter import CheckResult, ValidationReport
from disorderstop.simulate import (
    PathBatch,
    check_drop_rate,
    parallel_map,
    psi_from_observed,
    simulate_disorder_path,
)


logger = logging.getLogger(__name__)

LEMMA = "lemma"
DOMINANCE = "dominance"
DICHOTOMY = "dichotomy"
RESIDUALS = "residuals"
VALUE = "value"
ALL_CHECKS = (LEMMA, DOMINANCE, DICHOTOMY, RESIDUALS, VALUE)

# Stream keys for independent raw-model and reference-measure batches
_RAW_STREAM = 2
_REFERENCE_STREAM = 3
_THETA_PURPOSE = 1

# Tolerances on the probability of stopping at T
GEOMETRIC_AT_T_MAX = 0.02
LINEAR_AT_T_MIN = 0.01


def fixed_time_rule(t0: float) -> StopRule:
    """Stop at the first node at or after ``t0``."""

    def rule(grid: np.ndarray, psi: np.ndarray) -> np.ndarray:
        index = min(int(np.searchsorted(grid, t0 - 1e-12)), grid.size - 1)
        return np.full(psi.shape[0], index)

    return rule


def level_rule(level: float) -> StopRule:
    """Stop when psi first reaches a constant level."""

    def rule(grid: np.ndarray, psi: np.ndarray) -> np.ndarray:
        return stop_indices(np.full(grid.size, level), psi)

    return rule


def boundary_rule(boundary: Boundary) -> StopRule:
    """Stop when psi first reaches the boundary."""

    def rule(grid: np.ndarray, psi: np.ndarray) -> np.ndarray:
        return stop_indices(boundary.values, psi)

    return rule


@dataclass(frozen=True)
class PolicyEstimate:
    """Raw-model payoff of a stop rule."""

    value: float
    std_error: float
    frac_at_T: float
    n_paths: int


def _payoffs(
    model: DisorderModel,
    prior: UniformPrior,
    kind: ProblemKind,
    rules: Sequence[StopRule],
    batch: PathBatch,
    threads: int,
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Per-path payoffs and stop indices of every rule on shared raw paths."""
    effective = log_utility_model(model) if kind is ProblemKind.LOG_UTILITY else model
    grid = batch.grid

    def run(block: int) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        increments = batch.block_increments(block)
        theta = sample_theta(
            prior, batch.block_rng(block, _THETA_PURPOSE), batch.block_size_of(block)
        )
        observed = simulate_disorder_path(effective, theta, increments, grid)
        psi = psi_from_observed(effective, prior, observed, grid)
        keep = np.isfinite(psi).all(axis=1)
        psi = np.where(keep[:, None], psi, 0.0)
        payoffs, stops = [], []
        for rule in rules:
            index = rule(grid, psi)
            x_tau = np.take_along_axis(observed, index[:, None], axis=1)[:, 0]
            if kind is ProblemKind.GEOMETRIC:
                x_tau = np.exp(x_tau - 0.5 * model.sigma**2 * grid[index])
            payoffs.append(np.where(keep, x_tau, np.nan))
            stops.append(np.where(keep, index, -1))
        return payoffs, stops

    parts = parallel_map(run, range(batch.n_blocks), threads)
    payoffs = [np.concatenate([p[0][i] for p in parts]) for i in range(len(rules))]
    stops = [np.concatenate([p[1][i] for p in parts]) for i in range(len(rules))]
    if payoffs:
        check_drop_rate(int(np.count_nonzero(~np.isfinite(payoffs[0]))), batch.n_paths)
    return payoffs, stops


def _estimate(samples: np.ndarray, stops: np.ndarray, n_steps: int) -> PolicyEstimate:
    keep = np.isfinite(samples)
    est = IntegralEstimate.from_samples(samples[keep])
    frac = float(np.mean(stops[keep] == n_steps)) if keep.any() else 0.0
    return PolicyEstimate(est.value, est.std_error, frac, est.n_paths)


def raw_batch(grid: np.ndarray, mc_config: MCConfig) -> PathBatch:
    return mc_config.batch(grid, stream=(_RAW_STREAM,))


def evaluate_policy(
    model: DisorderModel,
    prior: UniformPrior,
    boundary: Boundary,
    problem_kind: Union[ProblemKind, str],
    mc_config: MCConfig,
) -> PolicyEstimate:
    """Payoff of stopping at the boundary, simulated under the raw model."""
    kind = ProblemKind(problem_kind)
    batch = raw_batch(boundary.grid, mc_config)
    payoffs, stops = _payoffs(
        model, prior, kind, [boundary_rule(boundary)], batch, mc_config.threads
    )
    return _estimate(payoffs[0], stops[0], boundary.n_steps)


def evaluate_rules(
    model: DisorderModel,
    prior: UniformPrior,
    rules: Mapping[str, StopRule],
    problem_kind: Union[ProblemKind, str],
    grid: np.ndarray,
    mc_config: MCConfig,
) -> Dict[str, PolicyEstimate]:
    """Raw-model payoffs of several rules on common random numbers."""
    kind = ProblemKind(problem_kind)
    batch = raw_batch(grid, mc_config)
    payoffs, stops = _payoffs(
        model, prior, kind, list(rules.values()), batch, mc_config.threads
    )
    n_steps = grid.size - 1
    return {
        name: _estimate(p, s, n_steps) for name, p, s in zip(rules, payoffs, stops)
    }


def check_lemma_identity(
    model: DisorderModel,
    prior: UniformPrior,
    stop_rule: StopRule,
    problem_kind: Union[ProblemKind, str],
    grid: np.ndarray,
    mc_config: MCConfig,
    name: str = LEMMA,
    density_weighted: bool = False,
) -> CheckResult:
    """Compare the raw payoff of a rule with its reduced representation.

    The left side simulates the raw model. The right side simulates psi
    under the reference measure and integrates the generic gain up to the
    stop time, mapped back with the payoff scale and offset.
    """
    kind = ProblemKind(problem_kind)
    lhs = evaluate_rules(model, prior, {name: stop_rule}, kind, grid, mc_config)[name]
    problem = make_problem(kind, model, prior, density_weighted)
    reference = mc_config.batch(grid, stream=(_REFERENCE_STREAM,))
    rhs = policy_integral(problem, stop_rule, reference, mc_config.threads).scaled(
        problem.payoff_scale, problem.payoff_offset
    )
    return _compare(name, lhs.value, lhs.std_error, rhs.value, rhs.std_error)


def _compare(
    name: str, lhs: float, lhs_se: float, rhs: float, rhs_se: float, detail: str = ""
) -> CheckResult:
    result = CheckResult(name, lhs, rhs, lhs_se, rhs_se, passed=False, detail=detail)
    result.passed = bool(abs(lhs - rhs) <= const.SIGMA_TOL * result.combined_std_error)
    return result


def lemma_rules(horizon_T: float) -> Dict[str, StopRule]:
    """Simple verifiable rules: fixed times and constant psi levels."""
    return {
        "tau=0": fixed_time_rule(0.0),
        "tau=T/4": fixed_time_rule(0.25 * horizon_T),
        "tau=T/2": fixed_time_rule(0.5 * horizon_T),
        "tau=T": fixed_time_rule(horizon_T),
        "psi>=0.5": level_rule(0.5),
        "psi>=1": level_rule(1.0),
        "psi>=2": level_rule(2.0),
    }


def lemma_suite(
    model: DisorderModel,
    prior: UniformPrior,
    problem_kind: Union[ProblemKind, str],
    grid: np.ndarray,
    mc_config: MCConfig,
    density_weighted: bool = False,
) -> List[CheckResult]:
    """Change-of-measure identities for every rule in :func:`lemma_rules`."""
    kind = ProblemKind(problem_kind)
    return [
        check_lemma_identity(
            model,
            prior,
            rule,
            kind,
            grid,
            mc_config,
            f"{LEMMA}[{kind.value}:{name}]",
            density_weighted,
        )
        for name, rule in lemma_rules(model.horizon_T).items()
    ]


def dominance_alternatives(boundary: Boundary) -> Dict[str, StopRule]:
    """Immediate stop, stop at T and three constant thresholds."""
    top, bottom = float(boundary.values[0]), float(boundary.values[-1])
    return {
        "tau=0": fixed_time_rule(0.0),
        "tau=T": fixed_time_rule(boundary.horizon_T),
        "psi>=a(T)": level_rule(bottom),
        "psi>=mid": level_rule(0.5 * (top + bottom)),
        "psi>=a(0)": level_rule(top),
    }


def dominance_check(
    model: DisorderModel,
    prior: UniformPrior,
    boundary: Boundary,
    alternatives: Mapping[str, StopRule],
    problem_kind: Union[ProblemKind, str],
    mc_config: MCConfig,
) -> List[CheckResult]:
    """The solved rule must not lose to any alternative beyond the noise."""
    kind = ProblemKind(problem_kind)
    rules: Dict[str, StopRule] = {"boundary": boundary_rule(boundary)}
    rules.update(alternatives)
    estimates = evaluate_rules(model, prior, rules, kind, boundary.grid, mc_config)
    solved = estimates.pop("boundary")
    results = []
    for name, alt in estimates.items():
        result = CheckResult(
            f"{DOMINANCE}[{kind.value}:{name}]",
            solved.value,
            alt.value,
            solved.std_error,
            alt.std_error,
            passed=False,
        )
        result.passed = bool(
            solved.value >= alt.value - const.SIGMA_TOL * result.combined_std_error
        )
        results.append(result)
    return results


def dichotomy_check(
    model: DisorderModel,
    prior_without_atom: UniformPrior,
    boundaries: Mapping[ProblemKind, Boundary],
    mc_config: MCConfig,
) -> Dict[ProblemKind, float]:
    """Empirical P(tau = T) for each given problem's boundary.

    Without mass at T the geometric rule stops before T almost surely,
    while the linear one solved with the unweighted gain waits until T with
    positive probability.
    """
    if prior_without_atom.atom_at_T > 0:
        raise ValueError(
            f"prior puts mass {prior_without_atom.atom_at_T} at T; "
            "the comparison needs G(T-) = 1"
        )
    return {
        kind: evaluate_policy(model, prior_without_atom, boundary, kind, mc_config).frac_at_T
        for kind, boundary in boundaries.items()
    }


def dichotomy_results(
    fractions: Mapping[ProblemKind, float], density_weighted: bool = False
) -> List[CheckResult]:
    """Turn stop-at-T fractions into pass/fail results.

    With the weighted gain f(T-) = 0 for every kind, so all rules are
    expected to stop before T.
    """
    results = []
    for kind, frac in fractions.items():
        if kind is ProblemKind.GEOMETRIC or density_weighted:
            passed = frac < GEOMETRIC_AT_T_MAX
            detail = f"expected < {GEOMETRIC_AT_T_MAX}"
            limit = GEOMETRIC_AT_T_MAX
        else:
            passed = frac > LINEAR_AT_T_MIN
            detail = f"expected > {LINEAR_AT_T_MIN}"
            limit = LINEAR_AT_T_MIN
        results.append(
            CheckResult(
                f"{DICHOTOMY}[{kind.value}]", frac, limit, 0.0, 0.0, passed, detail
            )
        )
    return results


def residual_check(
    model: DisorderModel,
    prior: UniformPrior,
    boundary: Boundary,
    problem_kind: Union[ProblemKind, str],
    mc_config: MCConfig,
    min_fraction: float = 0.95,
    density_weighted: bool = False,
) -> CheckResult:
    """Share of nodes where the boundary solves its own equation."""
    kind = ProblemKind(problem_kind)
    problem = make_problem(kind, model, prior, density_weighted)
    residuals = boundary_residuals(problem, boundary, mc_config)
    fraction = residuals.within_fraction
    return CheckResult(
        f"{RESIDUALS}[{kind.value}]",
        fraction,
        min_fraction,
        0.0,
        0.0,
        passed=fraction >= min_fraction,
        detail=f"max |F_k| = {float(np.max(np.abs(residuals.values), initial=0.0)):.4g}",
    )


def value_check(
    model: DisorderModel,
    prior: UniformPrior,
    boundary: Boundary,
    problem_kind: Union[ProblemKind, str],
    mc_config: MCConfig,
    density_weighted: bool = False,
) -> List[CheckResult]:
    """Value formula against the raw-model payoff, plus feasibility bounds."""
    kind = ProblemKind(problem_kind)
    problem = make_problem(kind, model, prior, density_weighted)
    value = value_integral(
        problem, boundary, mc_config.batch(boundary.grid), mc_config.threads
    ).scaled(problem.payoff_scale, problem.payoff_offset)
    policy = evaluate_policy(model, prior, boundary, kind, mc_config)
    results = [
        _compare(
            f"{VALUE}[{kind.value}]",
            value.value,
            value.std_error,
            policy.value,
            policy.std_error,
        )
    ]
    floor = problem.payoff_offset
    results.append(
        CheckResult(
            f"{VALUE}[{kind.value}:feasible]",
            value.value,
            floor,
            value.std_error,
            0.0,
            passed=value.value >= floor - const.SIGMA_TOL * value.std_error,
            detail="value of stopping at once",
        )
    )
    if kind is ProblemKind.LINEAR:
        ceiling = model.mu1 * prior.mean_theta()
        results.append(
            CheckResult(
                f"{VALUE}[{kind.value}:upper]",
                value.value,
                ceiling,
                value.std_error,
                0.0,
                passed=value.value <= ceiling + const.SIGMA_TOL * value.std_error,
                detail="stopping exactly at theta",
            )
        )
    return results


def complementary_kind(kind: ProblemKind) -> ProblemKind:
    """The problem the dichotomy check compares ``kind`` against."""
    return ProblemKind.LINEAR if kind is ProblemKind.GEOMETRIC else ProblemKind.GEOMETRIC


def run_checks(
    names: Sequence[str],
    model: DisorderModel,
    prior: UniformPrior,
    boundary: Boundary,
    problem_kind: Union[ProblemKind, str],
    mc_config: MCConfig,
    solve_config: Optional[MCConfig] = None,
    other_boundary: Optional[Boundary] = None,
    density_weighted: bool = False,
) -> ValidationReport:
    """Run the named checks against one solved boundary.

    Args:
        names: Subset of :data:`ALL_CHECKS`, run in that order.
        model: Observed-process parameters.
        prior: Law of the disorder time.
        boundary: Boundary under test.
        problem_kind: Problem the boundary was solved for.
        mc_config: Paths for the raw-model and value estimates.
        solve_config: Paths for boundary equations, used by the residual
            check and to solve the complementary boundary when
            ``other_boundary`` is missing. Defaults to ``mc_config``.
        other_boundary: Complementary problem's boundary for the dichotomy
            check.
        density_weighted: Use the weighted gain for the linear and
            log-utility reductions.

    Returns:
        The report; an empty name list gives an empty, passing report.
    """
    unknown = [name for name in names if name not in ALL_CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    kind = ProblemKind(problem_kind)
    solve_config = solve_config or mc_config
    report = ValidationReport()

    if LEMMA in names:
        report.extend(
            lemma_suite(model, prior, kind, boundary.grid, mc_config, density_weighted)
        )
    if DOMINANCE in names:
        report.extend(
            dominance_check(
                model, prior, boundary, dominance_alternatives(boundary), kind, mc_config
            )
        )
    if DICHOTOMY in names:
        if prior.atom_at_T > 0:
            logger.warning(
                f"Skipping dichotomy check: the prior puts mass {prior.atom_at_T} at T"
            )
        else:
            other_kind = complementary_kind(kind)
            if other_boundary is None:
                logger.debug(
                    f"Solving the {other_kind.value} boundary for the dichotomy check"
                )
                other_boundary = solve_boundary(
                    make_problem(other_kind, model, prior, density_weighted),
                    boundary.grid,
                    solve_config,
                )
            fractions = dichotomy_check(
                model, prior, {kind: boundary, other_kind: other_boundary}, mc_config
            )
            report.extend(dichotomy_results(fractions, density_weighted))
    if RESIDUALS in names:
        report.checks.append(
            residual_check(
                model,
                prior,
                boundary,
                kind,
                solve_config,
                density_weighted=density_weighted,
            )
        )
    if VALUE in names:
        report.extend(
            value_check(model, prior, boundary, kind, mc_config, density_weighted)
        )
    return report
