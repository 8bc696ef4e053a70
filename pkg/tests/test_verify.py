from itertools import combinations

import pytest

from primlim.antichain import is_kcore
from primlim.arith import PrimeBasis
from primlim.errors import ParameterError
from primlim.limits import fn_exact
from primlim.verify import kcore_subsets, verify_inequalities


def test_small_ranges_pass():
    assert verify_inequalities(1, 1).all_passed
    report = verify_inequalities(10, 2)
    assert report.all_passed
    names = {c.name for c in report.checks}
    assert names == {"sandwich", "f_le_fnk", "fnk_decreasing_in_k", "fiber_bound",
                     "decomposition", "removal_map"}


def test_corrupted_count_is_caught_with_witness():
    report = verify_inequalities(10, 2, fn=lambda n: 999 if n == 6 else fn_exact(n))
    assert not report.all_passed
    bad = {(c.name, c.params) for c in report.failures}
    assert ("sandwich", (6,)) in bad
    assert ("f_le_fnk", (6, 1)) in bad
    witness = next(c.witness for c in report.failures if c.name == "sandwich")
    assert witness["f"] == 999 and witness["upper"] == 64


def test_corrupted_kcore_count_breaks_decomposition():
    from primlim.antichain import count_kcore_subsets
    fnk = lambda n, k: count_kcore_subsets(n, PrimeBasis.of(k)) + (n == 9 and k == 2)
    report = verify_inequalities(10, 2, fnk=fnk)
    assert ("decomposition", (9, 2)) in {(c.name, c.params) for c in report.failures}


def test_range_limits():
    with pytest.raises(ParameterError):
        verify_inequalities(41, 1)
    with pytest.raises(ParameterError):
        verify_inequalities(10, 4)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_kcore_enumeration_matches_brute_force(k):
    b = PrimeBasis.of(k)
    for n in range(0, 13):
        brute = {frozenset(s) for r in range(n + 1)
                 for s in combinations(range(1, n + 1), r) if is_kcore(s, b)}
        listed = list(kcore_subsets(n, b))
        assert len(listed) == len(brute) and set(listed) == brute


def test_removal_soundness_exhaustive():
    report = verify_inequalities(20, 3)
    removal = [c for c in report.checks if c.name == "removal_map"]
    assert len(removal) == 60
    assert all(c.passed for c in removal)
    assert report.all_passed
