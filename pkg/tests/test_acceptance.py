"""One PASS/FAIL line per acceptance criterion, printed as each runs."""

import pytest

from orbitreg.acceptance import CHECKS, DEFAULT_SEED, run_check


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, capsys):
    result = run_check(number, DEFAULT_SEED)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
