"""Acceptance criteria, one test per criterion, each at its stated time budget.

Every test prints a single PASS/FAIL line (visible without -s) and then
asserts the outcome.  Run on its own with::

    pytest tests/test_acceptance.py -v
"""

import pytest

from preprojective.acceptance import check_names, run_check

CRITERIA = list(enumerate(check_names(), 1))


@pytest.mark.parametrize("number,name", CRITERIA, ids=[n for _, n in CRITERIA])
def test_criterion(number, name, capsys):
    res = run_check(name)
    with capsys.disabled():
        print(f"\ncriterion {number:2}: {res.line()}")
        if res.status != "pass":
            for ok, msg in res.findings:
                if not ok:
                    print(f"    {msg}")
    detail = "; ".join(msg for ok, msg in res.findings if not ok)
    assert res.status == "pass", detail
