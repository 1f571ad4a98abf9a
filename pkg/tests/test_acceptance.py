"""Exit criteria, one test per criterion; prints a PASS/FAIL line for each."""

import pytest

from photon_mediation.acceptance import CRITERIA, CRITERION_IDS, run_criterion


@pytest.mark.parametrize("fn, cid", list(zip(CRITERIA, CRITERION_IDS)), ids=CRITERION_IDS)
def test_criterion(fn, cid, fig1):
    result = run_criterion(fn, cid, fig1)
    print(result.line())
    assert result.passed, result.detail
