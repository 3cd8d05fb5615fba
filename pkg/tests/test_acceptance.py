"""One test per acceptance criterion, each run at its own tolerance and time limit."""

import pytest

from containerlab.acceptance import CRITERIA, run_criterion

RESULTS = []


def _line(res):
    status = "PASS" if res.passed else "FAIL"
    return f"{status} criterion {res.number:2d} {res.title} ({res.elapsed:.2f}s, limit {res.limit:g}s)"


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=lambda n: f"criterion{n:02d}")
def test_criterion(number):
    res = run_criterion(number)
    line = _line(res)
    RESULTS.append(line)
    print(line)
    failed = [c.to_dict() for c in res.checks if c.asserted and not c.holds]
    assert res.passed, failed or f"over time: {res.elapsed:.1f}s"
