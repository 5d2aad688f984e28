"""One pass/fail line per acceptance criterion; also runnable as a script."""

import sys

import pytest

from jaclat.verify import CRITERIA, run_criterion


@pytest.mark.parametrize("number", list(CRITERIA), ids=[f"criterion_{n}" for n in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.failures[:5]


if __name__ == "__main__":
    results = [run_criterion(n) for n in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
