"""Acceptance criteria at their stated tolerances and time budgets.

Each criterion prints one PASS/FAIL line (shown even under output capture).
"""

import pytest

from shiftedprimes.suites import ACCEPTANCE


@pytest.mark.parametrize("criterion", ACCEPTANCE, ids=[fn.__name__ for fn in ACCEPTANCE])
def test_acceptance(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.ok, f"{result.name}: {result.detail}"
    assert result.seconds < result.limit, f"{result.name}: {result.seconds:.1f} s over budget {result.limit:g} s"
