"""Acceptance gate: every criterion runs at its stated tolerance (exact
equality throughout) and prints one pass/fail line.  The implementations live
in groupinv.selfcheck so the CLI selfcheck replays a superset of this suite."""

from __future__ import annotations

import pytest

from groupinv.selfcheck import ALL_CRITERIA, golden_examples


@pytest.mark.parametrize("criterion", ALL_CRITERIA,
                         ids=[fn.check_name for fn in ALL_CRITERIA])
def test_acceptance_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.ok, result.detail


def test_selfcheck_golden_superset():
    result = golden_examples()
    print(result.line())
    assert result.ok, result.detail
