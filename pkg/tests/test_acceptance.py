"""Acceptance criteria 1-10, one printed line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or
``artifact selftest`` for the same report from the command line.
"""

import pytest

from artifact import acceptance

SEED = 42


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    r = acceptance.run(number, SEED)
    print()
    print(r.line())
    assert r.ok, r.detail
    assert r.seconds < r.limit, f"took {r.seconds:.2f}s, limit {r.limit:.0f}s"


def test_criteria_are_deterministic_in_the_seed():
    a = acceptance.run(7, SEED)
    b = acceptance.run(7, SEED)
    assert (a.ok, a.detail) == (b.ok, b.detail)
