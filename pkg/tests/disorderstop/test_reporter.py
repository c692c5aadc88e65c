# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Test for validation reporting logic"""

import json
import pathlib
from unittest.mock import patch

import pytest

from disorderstop.reporter import CheckResult, ResultsReporter, ValidationReport


def _check(name: str, passed: bool) -> CheckResult:
    return CheckResult(name, 1.0, 0.5, 0.3, 0.4, passed, detail="why")


def test_results_reporter_all_passed() -> None:
    """Test results reporter"""
    report = ValidationReport([_check("a", True), _check("b", True)])

    with patch("builtins.print") as mock_print:
        ResultsReporter().report_results(report)
        mock_print.assert_called_once_with("2/2 checks passed")


def test_results_reporter_no_checks() -> None:
    """Test results reporter with no checks"""
    with patch("builtins.print") as mock_print:
        ResultsReporter().report_results(ValidationReport())
        mock_print.assert_called_once_with("No checks run")


def test_results_reporter_with_failures() -> None:
    """Test results reporter with failures"""
    report = ValidationReport([_check("a", True), _check("b", False)])

    with patch("builtins.print") as mock_print:
        ResultsReporter().report_results(report)
        mock_print.assert_called_once_with(
            "1/2 checks passed\nFailed:\nb: lhs=1 rhs=0.5 se=0.5 why"
        )


def test_report_json(tmp_dir: str) -> None:
    report = ValidationReport([_check("a", False)])
    file_path = pathlib.Path(tmp_dir) / "report" / "checks.json"
    report.write_json(file_path)

    data = json.loads(file_path.read_text())
    assert data["passed"] is False
    assert data["checks"][0]["name"] == "a"
    assert data["checks"][0]["combined_std_error"] == pytest.approx(0.5)
