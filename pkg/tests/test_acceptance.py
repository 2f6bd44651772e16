"""One test per acceptance criterion; each prints a single [PASS]/[FAIL] line."""

import pytest

from nilamalg.suite import CRITERIA, SuiteConfig, run_criterion

CFG = SuiteConfig()


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number, CFG)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
