"""Runs every acceptance criterion at its stated tolerance and runtime limit."""

import pytest

from adl.acceptance import CRITERIA, run_criterion

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("entry", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(entry):
    res = run_criterion(entry)
    ACCEPTANCE_LINES.append(res.line())
    print(res.line())
    assert res.passed, res.detail
