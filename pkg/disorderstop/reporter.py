# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors

"""Results reporting for validation runs."""

import json
import math
import pathlib
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List


@dataclass
class CheckResult:
    """A dataclass to hold one validation comparison"""

    name: str
    lhs: float
    rhs: float
    lhs_std_error: float
    rhs_std_error: float
    passed: bool
    detail: str = ""

    @property
    def combined_std_error(self) -> float:
        return math.hypot(self.lhs_std_error, self.rhs_std_error)


@dataclass
class ValidationReport:
    """All checks of one validation run"""

    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def extend(self, checks: List[CheckResult]) -> None:
        self.checks.extend(checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": [
                {**asdict(check), "combined_std_error": check.combined_std_error}
                for check in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write_json(self, file_path: pathlib.Path) -> None:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        file_path.write_text(self.to_json() + "\n")


class ResultsReporter:
    """
    Prints a human-readable summary of a validation report.
    """

    def report_results(self, report: ValidationReport) -> None:
        """
        Report the results of a validation run.

        Args:
            report: ValidationReport object
        """
        if not report.checks:
            results_str = "No checks run"
        else:
            results_str = f"{len(report.checks) - len(report.failures)}/"
            results_str += f"{len(report.checks)} checks passed"
            if report.failures:
                results_str += "\nFailed:\n"
                results_str += ResultsReporter.get_failures_str(report.failures)

        print(results_str)  # noqa: T201

    @staticmethod
    def get_failures_str(failures: List[CheckResult]) -> str:
        """
        Return a string representation of the failed checks.
        """
        return "\n".join(
            f"{c.name}: lhs={c.lhs:.6g} rhs={c.rhs:.6g} "
            f"se={c.combined_std_error:.3g} {c.detail}".rstrip()
            for c in failures
        )
