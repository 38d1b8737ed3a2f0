"""The ten acceptance criteria, one test each, at the stated tolerances.

Each test prints a single [PASS]/[FAIL] line (live with ``-s``); conftest
repeats all of them in the terminal summary.
"""
import pytest

from scatterjump.acceptance import CRITERIA, SuiteConfig

CFG = SuiteConfig()
LINES: dict[int, str] = {}


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    res = criterion(CFG)
    LINES[res.number] = res.line()
    print(res.line())
    assert res.passed, res.line() + "".join(f"\n  {e}" for e in res.examples)
