"""Acceptance suite: every criterion at full scale, exact equality throughout.

Run with ``pytest -s tests/test_acceptance.py`` to see one verdict line per
criterion; the same checks back the ``surfaut selftest`` command.
"""

import pytest

from surfaut import selftest as st

SEED = 20260809

BUDGETS = {
    1: 30.0,
    2: 5.0,
    3: 5.0,
    4: 300.0,
    5: 120.0,
    6: 60.0,
    7: 900.0,
    8: 120.0,
    9: 10.0,
}


@pytest.mark.parametrize(
    "index,name", [(i, name) for i, (name, _) in enumerate(st.CRITERIA, 1)]
)
def test_criterion(index, name):
    result = st.run_criterion(index, SEED)
    print(result.line())
    assert result.ok, result.line()
    assert result.seconds < BUDGETS[index], (
        f"criterion {index} took {result.seconds:.1f}s, budget {BUDGETS[index]}s"
    )
