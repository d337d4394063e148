"""Acceptance suite: every criterion runs exactly, printing one
PASS/FAIL line each.  All checks are exact rational/integer assertions;
there are no tolerances to tune."""

import pytest

from treelevel.selftest import CRITERIA


@pytest.mark.parametrize("num,name,fn", CRITERIA,
                         ids=[f"criterion_{num:02d}_{name.replace(' ', '_')}"
                              for num, name, _ in CRITERIA])
def test_criterion(num, name, fn):
    ok, detail = fn()
    print(f"{'PASS' if ok else 'FAIL'} criterion {num} ({name}): {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"
