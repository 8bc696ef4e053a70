import functools
import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from primlim.antichain import count_kcore_subsets, count_primitive_subsets_oracle
from primlim.arith import PrimeBasis, enumerate_smooth
from primlim.errors import ParameterError, ResourceLimitError
from primlim.limits import (AlphaEnclosure, alpha_k_enclosure, decrease_verdict, fiber_exponent,
                            finite_n_gap, fn_exact, fnk_product, log2_bracket,
                            pk_upper_bound_log2, removal_map, tail_bound_log2)
from primlim.smoothgrid import count_smooth_primitive


@pytest.mark.parametrize("n, k, expected", [(4, 1, 8), (4, 2, 7), (10, 1, 180)])
def test_fnk_product_examples(n, k, expected):
    b = PrimeBasis.of(k)
    assert count_kcore_subsets(n, b) == expected
    assert fnk_product(n, b) == expected


def test_fnk_10_1_by_hand():
    # odd R in {1,3,5,7,9}: P_1(10) P_1(3) P_1(2) P_1(1) P_1(1)
    assert 5 * 3 * 3 * 2 * 2 == fnk_product(10, 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_decomposition_identity_small(k):
    b = PrimeBasis.of(k)
    for n in range(1, 26):
        assert fnk_product(n, b) == count_kcore_subsets(n, b)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_fnk_product_blocks_match_per_R_product(k):
    b = PrimeBasis.of(k)
    for n in (37, 100, 257, 600):
        naive = 1
        for R in range(1, n + 1):
            if math.gcd(R, b.D) == 1:
                naive *= count_smooth_primitive(n // R, b)
        assert fnk_product(n, b) == naive


def test_fnk_product_parallel_identical():
    assert fnk_product(5000, 2, workers=2) == fnk_product(5000, 2)


@pytest.mark.parametrize("n, expected", [(1, 2), (4, 7), (10, 103)])
def test_fn_exact(n, expected):
    assert count_primitive_subsets_oracle(range(1, n + 1)) == expected
    assert fn_exact(n) == expected


def test_fn_exact_cap():
    with pytest.raises(ResourceLimitError):
        fn_exact(65)


def test_removal_map_examples():
    assert removal_map({1, 5}, 6, 2) == {5}
    assert removal_map({4, 5, 6}, 6, 2) == {4, 5, 6}
    assert removal_map(set(), 6, 2) == set()
    with pytest.raises(ParameterError):
        removal_map({7}, 6, 2)


def test_fiber_exponent():
    for n in range(1, 60):
        for k in range(1, 5):
            assert fiber_exponent(n, k) == sum(1 for i in range(1, n + 1) if i < n / k)


def test_pk_upper_bound_examples():
    assert pk_upper_bound_log2(1, 1) == 1.0
    assert pk_upper_bound_log2(1, 4) == 1.0
    exact = (1 + mpmath.log(10, 2)) ** 2
    val = pk_upper_bound_log2(10, 2)
    assert val >= exact and val - exact < 1e-12
    assert abs(val - 18.66) < 0.02
    assert val >= math.log2(count_primitive_subsets_oracle(enumerate_smooth(10, PrimeBasis.of(2))))


@given(st.integers(1, 10 ** 12), st.integers(1, 6))
def test_pk_upper_bound_rounds_up(x, k):
    mpmath.mp.dps = 40
    assert pk_upper_bound_log2(x, k) >= (1 + mpmath.log(x, 2)) ** k


@functools.lru_cache(maxsize=None)
def _symbolic_tail(k):
    j, J = sympy.symbols("j J", integer=True, nonnegative=True)
    return J, sympy.simplify(sympy.summation((j + 2) ** k / sympy.Integer(2) ** (j + 1),
                                             (j, J, sympy.oo)))


def exact_tail(k, L, basis):
    J, expr = _symbolic_tail(k)
    s = sympy.nsimplify(expr.subs(J, L.bit_length() - 1))
    num, den = sympy.fraction(s)
    return Fraction(int(num), int(den)) * Fraction(basis.phi_D, basis.D)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("J", [1, 3, 8, 16, 30])
def test_tail_bound_against_closed_form(k, J):
    b = PrimeBasis.of(k)
    exact = exact_tail(k, 2 ** J, b)
    got = tail_bound_log2(k, 2 ** J, b)
    assert Fraction(got) >= exact
    assert got - float(exact) <= 1e-15 * max(1.0, float(exact))


def test_tail_bound_examples():
    b = PrimeBasis.of(1)
    assert exact_tail(1, 8, b) == Fraction(3, 8)
    assert 0.375 <= tail_bound_log2(1, 8, b) <= 0.375 + 1e-15
    assert tail_bound_log2(1, 2 ** 30, b) < 1e-6


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_tail_nonincreasing(k):
    tails = [tail_bound_log2(k, 2 ** J) for J in range(1, 40)]
    assert all(a >= b for a, b in zip(tails, tails[1:]))


def test_tail_majorant_dominates_true_terms():
    # per block, (2+j)^k must dominate log2 P_k on [2^j, 2^(j+1))
    for k in (1, 2, 3):
        b = PrimeBasis.of(k)
        for j in range(0, 12):
            assert math.log2(count_smooth_primitive(2 ** (j + 1) - 1, b)) <= (2 + j) ** k


def test_bad_L():
    for L in (0, 1, 3, 12):
        with pytest.raises(ParameterError):
            tail_bound_log2(1, L)
        with pytest.raises(ParameterError):
            alpha_k_enclosure(1, L)


@settings(max_examples=200)
@given(st.integers(1, 2 ** 4000))
def test_log2_bracket(v):
    mpmath.mp.dps = 60
    lo, hi = log2_bracket(v)
    true = mpmath.log(v, 2)
    assert lo <= true <= hi
    assert hi - lo <= 1e-12 * max(1.0, float(true))


def test_log2_bracket_exact_powers():
    for e in (0, 1, 52, 61, 200):
        assert log2_bracket(2 ** e) == (float(e), float(e))


def test_alpha_single_term():
    e = alpha_k_enclosure(1, 2)
    assert e.lower_log2 >= 0.25 - 1e-12
    assert e.lower_log2 <= 0.25


def alpha1_log2_reference(dps):
    # P_1 is floor(log2 l) + 2, constant on [2^j, 2^(j+1)) where the weights sum to 2^-(j+1)
    mpmath.mp.dps = dps
    return mpmath.nsum(lambda j: mpmath.log(j + 2, 2) / mpmath.mpf(2) ** (j + 1), [0, mpmath.inf]) / 2


def test_alpha_1_enclosure_contains_high_precision_value():
    ref = alpha1_log2_reference(160)
    for J in (1, 4, 10, 20):
        e = alpha_k_enclosure(1, 2 ** J)
        assert e.lower_log2 <= ref <= e.upper_log2
    e = alpha_k_enclosure(1, 2 ** 20)
    assert 1.6 <= e.lower_value <= e.upper_value <= 1.7
    assert e.upper_value - e.lower_value <= 1e-3


@pytest.mark.parametrize("k", [1, 2, 3])
def test_enclosure_nesting_and_validity(k):
    encs = [alpha_k_enclosure(k, 2 ** J) for J in range(1, 13)]
    for a, b in zip(encs, encs[1:]):
        assert b.within(a)
        assert b.width_log2 < a.width_log2
    assert all(e.upper_value >= math.sqrt(2) for e in encs)
    assert all(e.lower_log2 <= e.upper_log2 for e in encs)


def test_enclosure_reproducible():
    assert alpha_k_enclosure(3, 2 ** 10) == alpha_k_enclosure(3, 2 ** 10, workers=2)


def test_decrease_verdict():
    a1 = alpha_k_enclosure(1, 2 ** 16)
    a2 = alpha_k_enclosure(2, 2 ** 16)
    assert decrease_verdict(a2, a1) == "certified"
    loose = AlphaEnclosure(k=2, L=2, lower_log2=0.0, upper_log2=5.0, error_budget=0.0)
    assert decrease_verdict(loose, a1) == "inconclusive"


def test_finite_n_gap_small_n():
    e = alpha_k_enclosure(1, 2 ** 20)
    gap = finite_n_gap(10, 1, e)
    assert gap == pytest.approx(abs(math.log2(180) / 10 - e.midpoint_log2), abs=1e-12)


def test_gap_table_shrinks_for_k1():
    e = alpha_k_enclosure(1, 2 ** 20)
    gaps = [finite_n_gap(n, 1, e) for n in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)]
    assert gaps[-1] < gaps[0]
    assert gaps[-1] <= 0.02
