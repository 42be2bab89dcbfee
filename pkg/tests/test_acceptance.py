"""Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL
line printed per criterion.

Run the full versions with plain pytest; ``TORUSRES_QUICK=1`` switches to the
reduced-scale variants used by ``torusres verify --quick``.
"""

import os

import pytest

from torusres import acceptance as acc

QUICK = os.environ.get("TORUSRES_QUICK", "") == "1"


@pytest.mark.parametrize("index,name,check", acc.CRITERIA,
                         ids=[f"{i:02d}-{n}" for i, n, _ in acc.CRITERIA])
def test_criterion(index, name, check):
    result = check(quick=QUICK, seed=0)
    status = "PASS" if result.passed else "FAIL"
    print(f"\n[{status}] criterion {result.index:2d} ({name}): "
          f"{result.detail} [{result.seconds:.1f}s]")
    assert result.passed, f"criterion {index} failed: {result.detail}"
