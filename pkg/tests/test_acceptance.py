"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import pytest

from conjpoints import acceptance as acc

# wall-clock limits per criterion, in seconds
LIMITS = {1: 3 * 300, 2: 60, 4: 300, 5: 600, 6: 300}


@pytest.fixture
def report(capsys):
    def emit(result):
        with capsys.disabled():
            print("\n" + result.line())
    return emit


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(acc.CRITERIA))
def test_criterion(number, report):
    result = acc._timed(number, *acc.CRITERIA[number])
    report(result)
    assert result.passed, result.detail
    if number in LIMITS:
        assert result.seconds < LIMITS[number], f"took {result.seconds:.1f}s"


@pytest.mark.slow
def test_veronese_tau5_stretch(report):
    # a budget stop is acceptable here, a wrong value is not
    result = acc._timed(1, "Veronese symord, tau=5 stretch", acc.veronese_tau5)
    report(result)
    assert result.passed, result.detail
