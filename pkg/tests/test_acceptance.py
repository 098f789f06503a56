"""Acceptance gate: every criterion runs at its pinned tolerance and prints
one pass/fail line (use pytest -s to see all lines as they run)."""

import pytest

from weldlab.acceptance import CRITERIA, run_suite

SEED = 7


@pytest.mark.parametrize("num,name,fn,seeded", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, name, fn, seeded):
    passed, detail = fn(SEED) if seeded else fn()
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {name} -- {detail}")
    assert passed, f"criterion {num} ({name}): {detail}"


def test_suite_report_shape():
    report = run_suite(seed=SEED)
    assert report["all_passed"] is True
    assert len(report["results"]) == 10
    assert all({"criterion", "name", "passed", "detail"} <= set(r) for r in report["results"])
