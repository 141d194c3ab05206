"""Acceptance gate: one test per criterion, each printing its pass/fail line.

The criteria and their tolerances live in bosegas.verify; the CLI `verify`
subcommand runs the same registry, so CI and command-line checks agree.
"""

import pytest

from bosegas import verify


@pytest.mark.parametrize("ident", list(verify.CRITERIA), ids=lambda i: f"criterion-{i}")
def test_acceptance_criterion(ident):
    result = verify.run_criterion(ident)
    print(result.summary_line())
    for line in result.details:
        print(f"    {line}")
    assert result.passed, "\n".join([result.summary_line(), *result.details])
