"""The eleven acceptance checks at full size and their stated time limits.

Each check prints one ``[PASS]``/``[FAIL]`` line; the same battery runs from
the command line with ``sg suite --all``.
"""

import pytest

from spatialgraph.suite import CHECKS, run_check

SEED = 7


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=[f"{c[0]:02d}-{c[1]}" for c in CHECKS])
def test_acceptance(number, capsys):
    r = run_check(number, seed=SEED, scale=1.0)
    with capsys.disabled():
        print("\n" + r.line)
    assert r.ok, "\n".join([r.detail] + r.failures[:5])
