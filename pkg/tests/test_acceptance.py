"""The thirteen acceptance criteria at digits = 50, one line of output each."""

import pytest

from conftest import ACCEPTANCE_LINES
from levyint.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1]}" for c in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    ACCEPTANCE_LINES.append((number, result.line()))
    assert result.passed, result.line()
