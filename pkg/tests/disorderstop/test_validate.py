# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Unit tests for the raw-model checks"""

import numpy as np
import pytest

from disorderstop import const
from disorderstop.boundary import solve_boundary
from disorderstop.expectation import MCConfig
from disorderstop.model import (
    Boundary,
    DisorderModel,
    ProblemKind,
    UniformPrior,
    make_problem,
)
from disorderstop.simulate import uniform_grid
from disorderstop.validate import (
    ALL_CHECKS,
    check_lemma_identity,
    dichotomy_check,
    dichotomy_results,
    dominance_alternatives,
    dominance_check,
    evaluate_policy,
    evaluate_rules,
    fixed_time_rule,
    lemma_rules,
    lemma_suite,
    level_rule,
    run_checks,
    value_check,
)
from tests.testutils import constant_boundary


GRID = uniform_grid(1.0, 20)


def test_fixed_time_rule_picks_first_node_at_or_after() -> None:
    psi = np.zeros((3, GRID.size))
    np.testing.assert_array_equal(fixed_time_rule(0.5)(GRID, psi), [10, 10, 10])
    np.testing.assert_array_equal(fixed_time_rule(0.52)(GRID, psi), [11, 11, 11])
    np.testing.assert_array_equal(fixed_time_rule(5.0)(GRID, psi), [20, 20, 20])


def test_level_rule() -> None:
    psi = np.tile(np.linspace(0.0, 2.0, GRID.size), (2, 1))
    psi[1] = 0.0
    np.testing.assert_array_equal(level_rule(1.0)(GRID, psi), [10, 20])


def test_raw_payoff_of_fixed_times(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    """Test E X_T = 0 and E X_{T/2} = 0.25 under the raw model."""
    estimates = evaluate_rules(
        figure1_model,
        figure1_prior,
        {"T": fixed_time_rule(1.0), "T/2": fixed_time_rule(0.5)},
        ProblemKind.LINEAR,
        GRID,
        MCConfig(seed=31, n_paths=20_000),
    )

    assert abs(estimates["T"].value) <= const.SIGMA_TOL * estimates["T"].std_error
    assert estimates["T"].frac_at_T == 1.0
    half = estimates["T/2"]
    assert abs(half.value - 0.25) <= const.SIGMA_TOL * half.std_error
    assert half.frac_at_T == 0.0


def test_raw_geometric_payoff_of_immediate_stop(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    estimates = evaluate_rules(
        figure1_model,
        figure1_prior,
        {"now": fixed_time_rule(0.0)},
        "geometric",
        GRID,
        MCConfig(n_paths=100),
    )
    assert estimates["now"].value == 1.0
    assert estimates["now"].std_error == 0.0


def test_lemma_identity_at_half_horizon(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    result = check_lemma_identity(
        figure1_model,
        figure1_prior,
        fixed_time_rule(0.5),
        ProblemKind.LINEAR,
        GRID,
        MCConfig(seed=32, n_paths=20_000),
        name="half",
    )

    assert result.name == "half"
    assert result.passed
    assert result.rhs == pytest.approx(0.25, abs=4 * result.rhs_std_error)


def test_geometric_lemma_identity_at_half_horizon(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    result = check_lemma_identity(
        figure1_model,
        figure1_prior,
        fixed_time_rule(0.5),
        ProblemKind.GEOMETRIC,
        GRID,
        MCConfig(seed=34, n_paths=20_000),
    )
    assert result.passed, result


def test_level_rule_identity_needs_weighted_gain(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    """Test the unweighted linear gain overstates E X_tau for a psi-level rule.

    The raw payoff of stopping at psi >= 1 is about 0.21; the unweighted
    reduction gives about 0.34 and the weighted one matches.
    """
    mc = MCConfig(seed=33, n_paths=20_000)
    unweighted = check_lemma_identity(
        figure1_model, figure1_prior, level_rule(1.0), ProblemKind.LINEAR, GRID, mc
    )
    weighted = check_lemma_identity(
        figure1_model,
        figure1_prior,
        level_rule(1.0),
        ProblemKind.LINEAR,
        GRID,
        mc,
        density_weighted=True,
    )

    assert not unweighted.passed
    assert unweighted.rhs - unweighted.lhs > 0.1
    assert weighted.lhs == unweighted.lhs
    assert weighted.passed, weighted


def test_lemma_rules_cover_times_and_levels() -> None:
    rules = lemma_rules(2.0)
    assert len(rules) >= 5
    psi = np.zeros((1, GRID.size))
    assert rules["tau=T"](uniform_grid(2.0, 20), psi)[0] == 20


def test_dominance_alternatives(solved_linear: Boundary) -> None:
    alternatives = dominance_alternatives(solved_linear)
    assert set(alternatives) == {"tau=0", "tau=T", "psi>=a(T)", "psi>=mid", "psi>=a(0)"}


def test_dichotomy_needs_prior_without_atom(
    figure1_model: DisorderModel, solved_linear: Boundary
) -> None:
    prior = UniformPrior(T=1.0, g0=0.0, rho=0.5)
    with pytest.raises(ValueError, match="mass"):
        dichotomy_check(figure1_model, prior, {ProblemKind.LINEAR: solved_linear}, MCConfig())


def test_dichotomy_results() -> None:
    results = dichotomy_results({ProblemKind.GEOMETRIC: 0.0, ProblemKind.LINEAR: 0.3})
    assert [r.passed for r in results] == [True, True]
    assert results[0].name == "dichotomy[geometric]"

    results = dichotomy_results({ProblemKind.GEOMETRIC: 0.2, ProblemKind.LINEAR: 0.0})
    assert [r.passed for r in results] == [False, False]

    weighted = dichotomy_results(
        {ProblemKind.GEOMETRIC: 0.0, ProblemKind.LINEAR: 0.0}, density_weighted=True
    )
    assert [r.passed for r in weighted] == [True, True]
    assert weighted[1].detail == "expected < 0.02"


def test_dichotomy_runs_when_leftover_mass_is_rounding() -> None:
    """Test a prior whose mass at T is zero up to rounding is not skipped."""
    model = DisorderModel(mu1=1.0, mu2=-1.0, sigma=1.0, T=3.0)
    prior = UniformPrior(T=3.0, g0=0.1, rho=0.3)
    stop_now = constant_boundary(0.0, n_steps=4, horizon_T=3.0)

    report = run_checks(
        ["dichotomy"],
        model,
        prior,
        stop_now,
        ProblemKind.GEOMETRIC,
        MCConfig(n_paths=50),
        other_boundary=stop_now,
    )
    assert [c.name for c in report.checks] == [
        "dichotomy[geometric]",
        "dichotomy[linear]",
    ]
    assert report.checks[0].lhs == 0.0


def test_policy_of_solved_boundary_reports_stops_at_horizon(
    figure1_model: DisorderModel,
    figure1_prior: UniformPrior,
    solved_linear: Boundary,
) -> None:
    estimate = evaluate_policy(
        figure1_model, figure1_prior, solved_linear, "linear", MCConfig(n_paths=2000)
    )
    assert 0.0 < estimate.frac_at_T < 1.0
    assert estimate.n_paths == 2000


def test_check_names() -> None:
    assert ALL_CHECKS == ("lemma", "dominance", "dichotomy", "residuals", "value")


def test_run_checks_empty_and_unknown(
    figure1_model: DisorderModel, figure1_prior: UniformPrior, solved_linear: Boundary
) -> None:
    report = run_checks(
        [], figure1_model, figure1_prior, solved_linear, "linear", MCConfig(n_paths=10)
    )
    assert report.passed
    assert report.checks == []

    with pytest.raises(ValueError, match="unknown check"):
        run_checks(
            ["lemma", "bogus"],
            figure1_model,
            figure1_prior,
            solved_linear,
            "linear",
            MCConfig(n_paths=10),
        )


def test_run_checks_skips_dichotomy_with_atom(
    figure1_model: DisorderModel, solved_linear: Boundary
) -> None:
    prior = UniformPrior(T=1.0, g0=0.0, rho=0.5)
    report = run_checks(
        ["dichotomy"], figure1_model, prior, solved_linear, "linear", MCConfig(n_paths=10)
    )
    assert report.checks == []


def test_residual_check_flags_corrupted_boundary(
    figure1_model: DisorderModel,
    figure1_prior: UniformPrior,
    solved_linear: Boundary,
    small_mc: MCConfig,
) -> None:
    """Test a boundary scaled by 1.5 no longer solves its own equation."""
    report = run_checks(
        ["residuals"],
        figure1_model,
        figure1_prior,
        solved_linear.scaled(1.5),
        ProblemKind.LINEAR,
        small_mc,
    )
    assert not report.passed
    assert report.failures[0].name == "residuals[linear]"


@pytest.mark.slow
@pytest.mark.parametrize("kind", list(ProblemKind))
def test_lemma_suite(
    figure1_model: DisorderModel, figure1_prior: UniformPrior, kind: ProblemKind
) -> None:
    results = lemma_suite(
        figure1_model,
        figure1_prior,
        kind,
        GRID,
        MCConfig(seed=41, n_paths=100_000, threads=0),
        density_weighted=True,
    )
    assert len(results) >= 5
    assert all(r.passed for r in results), [r for r in results if not r.passed]


@pytest.mark.slow
def test_solved_boundaries_pass_value_dominance_and_dichotomy(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    solve_mc = MCConfig(seed=42, n_paths=20_000, threads=0)
    check_mc = MCConfig(seed=43, n_paths=200_000, threads=0)
    grid = uniform_grid(1.0, 50)
    boundaries = {
        kind: solve_boundary(
            make_problem(kind, figure1_model, figure1_prior, density_weighted=True),
            grid,
            solve_mc,
        )
        for kind in (ProblemKind.LINEAR, ProblemKind.GEOMETRIC)
    }

    for kind, boundary in boundaries.items():
        for result in value_check(
            figure1_model, figure1_prior, boundary, kind, check_mc, density_weighted=True
        ):
            assert result.passed, result
        alternatives = dominance_alternatives(boundary)
        for result in dominance_check(
            figure1_model, figure1_prior, boundary, alternatives, kind, check_mc
        ):
            assert result.passed, result

    fractions = dichotomy_check(figure1_model, figure1_prior, boundaries, check_mc)
    results = dichotomy_results(fractions, density_weighted=True)
    assert all(r.passed for r in results), fractions


@pytest.mark.slow
def test_unweighted_linear_value_misses_raw_payoff(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    """Test the unweighted linear boundary's value formula overstates its
    raw payoff (about 0.37 against 0.24)."""
    grid = uniform_grid(1.0, 50)
    boundary = solve_boundary(
        make_problem(ProblemKind.LINEAR, figure1_model, figure1_prior),
        grid,
        MCConfig(seed=42, n_paths=20_000, threads=0),
    )
    value = value_check(
        figure1_model,
        figure1_prior,
        boundary,
        ProblemKind.LINEAR,
        MCConfig(seed=43, n_paths=200_000, threads=0),
    )[0]

    assert not value.passed
    assert value.lhs - value.rhs > 0.05


@pytest.mark.slow
def test_geometric_stops_at_horizon_less_on_finer_grids(
    figure1_model: DisorderModel, figure1_prior: UniformPrior
) -> None:
    problem = make_problem(ProblemKind.GEOMETRIC, figure1_model, figure1_prior)
    solve_mc = MCConfig(seed=44, n_paths=5000, threads=0)
    check_mc = MCConfig(seed=45, n_paths=50_000, threads=0)

    fractions = [
        evaluate_policy(
            figure1_model,
            figure1_prior,
            solve_boundary(problem, uniform_grid(1.0, steps), solve_mc),
            ProblemKind.GEOMETRIC,
            check_mc,
        ).frac_at_T
        for steps in (25, 400)
    ]
    assert fractions[1] <= fractions[0] + 1e-3, fractions
    assert fractions[1] < 0.02
