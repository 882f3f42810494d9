"""Every acceptance criterion, each at its stated tolerance and time limit.

One PASS/FAIL line per criterion is printed and repeated in the
"acceptance criteria" section of the pytest summary.
"""

import pytest

from fusionlim import acceptance

from conftest import ACCEPTANCE_LINES


@pytest.fixture(scope="module")
def ws():
    return acceptance.Workspace()


def run_criterion(fn, ws):
    row = fn(ws)
    line = row.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    for part in row.details.get("parts", []):
        sub = acceptance.Row(**{k: part[k] for k in (
            "id", "name", "expected", "actual", "passed", "seconds", "limit", "required")})
        ACCEPTANCE_LINES.append("    " + sub.line())
    return row


@pytest.mark.slow
@pytest.mark.parametrize("fn", acceptance.REQUIRED, ids=lambda f: f.__name__)
def test_required_criterion(fn, ws):
    row = run_criterion(fn, ws)
    assert row.passed, row.line()


@pytest.mark.slow
@pytest.mark.stretch
@pytest.mark.parametrize("fn", acceptance.STRETCH, ids=lambda f: f.__name__)
def test_stretch_criterion(fn, ws):
    row = run_criterion(fn, ws)
    assert row.passed, row.line()
