"""The acceptance gate: every criterion runs at its stated budget and must
pass exactly; one line per criterion in the verbose log."""

import pytest

from baire import acceptance


@pytest.mark.parametrize("name,criterion", acceptance.CRITERIA,
                         ids=[name for name, _ in acceptance.CRITERIA])
def test_criterion(name, criterion):
    result = criterion()
    print(f"[{'pass' if result.ok else 'FAIL'}] {result.name} "
          f"({result.seconds:.2f}s / limit {result.limit:.0f}s) {result.detail}")
    assert result.ok, f"{result.name}: {result.detail}"
    assert result.seconds < result.limit, \
        f"{result.name} took {result.seconds:.1f}s, over its {result.limit:.0f}s budget"
