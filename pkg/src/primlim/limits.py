"""Growth constants of f(n, k) and the exact identities behind them.

``fnk_product`` evaluates f(n, k) through the factorization of ``[n]`` by
rough part, ``alpha_k_enclosure`` brackets log2 of the limit

    alpha_k = prod_{l >= 1} P_k(l) ** ((1/l - 1/(l+1)) * phi(D) / D)

and ``tail_bound_log2`` bounds the part of that product beyond a truncation
level.  All logarithms are base 2.
"""

from __future__ import annotations

import bisect
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Set, Tuple

from .antichain import DEFAULT_MEMO_ENTRIES, count_antichains
from .arith import as_basis, coprime_count_for, enumerate_smooth
from .errors import ParameterError, ResourceLimitError
from .smoothgrid import DEFAULT_MAX_STATES, count_smooth_primitive, pk_table

FN_CAP = 64
TERM_SLACK = 2.0 ** -45
DEFAULT_TAIL_TOL = 2.0 ** -60


def _down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -math.inf)
    return x


def _up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, math.inf)
    return x


def log2_bracket(v: int) -> Tuple[float, float]:
    """Floats ``lo <= log2(v) <= hi`` for a positive integer ``v``.

    ``v`` is cut to its leading 61 bits (60 fractional bits past the top one),
    so ``v`` lies in ``[m, m + 1) * 2**shift``; the float log of each end is
    then widened by a few ulps.
    """
    if v < 1:
        raise ParameterError("log2 of a count needs a positive integer")
    shift = v.bit_length() - 61
    if shift <= 0:
        m, exact = v, True
    else:
        m = v >> shift
        exact = (m << shift) == v
    shift = max(shift, 0)
    lo = shift + math.log2(m)
    hi = shift + math.log2(m if exact else m + 1)
    if exact and m & (m - 1) == 0:
        return lo, hi
    eps = 4 * math.ulp(hi) + 2.0 ** -50
    return _down(lo - eps), _up(hi + eps)


def fn_exact(n: int, memo_entries: int = DEFAULT_MEMO_ENTRIES) -> int:
    """f(n): the number of primitive subsets of ``{1..n}``."""
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    if n > FN_CAP:
        raise ResourceLimitError(f"fn_exact is capped at n={FN_CAP}")
    return count_antichains(range(1, n + 1), memo_entries)


def _pk_job(args):
    x, k, max_states = args
    return count_smooth_primitive(x, k, max_states)


def fnk_product(n: int, basis, workers: int = 1,
                max_states: int = DEFAULT_MAX_STATES) -> int:
    """f(n, k) as the product of P_k(n // R) over ``R <= n`` coprime to ``D``.

    ``R`` is grouped into blocks of constant ``n // R``; each block contributes
    ``P_k(q) ** (number of R in it coprime to D)``.  P_k is evaluated once per
    distinct largest-smooth-below-``q`` value.
    """
    basis = as_basis(basis)
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    smooth = enumerate_smooth(n, basis)
    exponents: Dict[int, int] = defaultdict(int)
    lo = 1
    while lo <= n:
        q = n // lo
        hi = n // q
        c = coprime_count_for(lo, hi, basis)
        if c:
            exponents[smooth[bisect.bisect_right(smooth, q) - 1]] += c
        lo = hi + 1
    args = sorted(exponents)
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_pk_job, [(x, basis.k, max_states) for x in args]))
    else:
        values = [count_smooth_primitive(x, basis, max_states) for x in args]
    result = 1
    for x, v in zip(args, values):
        result *= v ** exponents[x]
    return result


def fiber_exponent(n: int, k: int) -> int:
    """``|{i in [n] : i < n/k}|``: how many elements the removal map may forget."""
    return (n - 1) // k


def removal_map(s: Iterable[int], n: int, k: int) -> Set[int]:
    """Drop every element strictly below ``n / k``."""
    s = set(s)
    if any(e < 1 or e > n for e in s):
        raise ParameterError("s must be a subset of {1..n}")
    return {e for e in s if e * k >= n}


def pk_upper_bound_log2(x: int, k: int) -> float:
    """``(1 + log2 x) ** k`` rounded upward."""
    if x < 1:
        raise ParameterError(f"x must be positive, got {x}")
    if x & (x - 1) == 0:
        return float((x.bit_length()) ** k)
    base = _up(1.0 + math.log2(x), 2)
    return _up(base ** k * (1 + 2.0 ** -50))


def _level(L: int) -> int:
    if L < 2 or L & (L - 1):
        raise ParameterError(f"L must be a power of two >= 2, got {L}")
    return L.bit_length() - 1


def tail_bound_log2(k: int, L: int, basis=None, tol: float = DEFAULT_TAIL_TOL) -> float:
    """Upper bound on ``(phi(D)/D) * sum_{l >= L} log2 P_k(l) / (l (l+1))``.

    On ``[2**j, 2**(j+1))`` we have ``log2 P_k(l) <= (2 + j)**k`` and the
    weights sum to ``2**-(j+1)``.  Block terms are summed exactly until the
    geometric remainder (ratio ``((3+j)/(2+j))**k / 2``) drops under ``tol``.
    """
    basis = as_basis(basis if basis is not None else k)
    J = _level(L)
    tol = Fraction(tol)
    total = Fraction(0)
    j = J
    while True:
        term = Fraction((2 + j) ** k, 2 ** (j + 1))
        ratio = Fraction((3 + j) ** k, 2 * (2 + j) ** k)
        if ratio < 1:
            rest = term / (1 - ratio)
            if rest <= tol:
                total += rest
                break
        total += term
        j += 1
    bound = total * Fraction(basis.phi_D, basis.D)
    return _up(float(bound))


@dataclass(frozen=True)
class AlphaEnclosure:
    """Rigorous bracket of log2(alpha_k) from a truncation at ``L``."""

    k: int
    L: int
    lower_log2: float
    upper_log2: float
    error_budget: float

    @property
    def width_log2(self) -> float:
        return self.upper_log2 - self.lower_log2

    @property
    def midpoint_log2(self) -> float:
        return (self.lower_log2 + self.upper_log2) / 2

    @property
    def lower_value(self) -> float:
        return _down(2.0 ** self.lower_log2, 2)

    @property
    def upper_value(self) -> float:
        return _up(2.0 ** self.upper_log2, 2)

    def contains_log2(self, y: float) -> bool:
        return self.lower_log2 <= y <= self.upper_log2

    def within(self, other: "AlphaEnclosure") -> bool:
        return other.lower_log2 <= self.lower_log2 and self.upper_log2 <= other.upper_log2


def alpha_k_enclosure(k: int, L: int, tol: float = 2.0 ** -40, workers: int = 1,
                      max_states: int = DEFAULT_MAX_STATES) -> AlphaEnclosure:
    """Enclose log2(alpha_k) using exact P_k(l) for ``l < L`` plus the tail bound.

    P_k is constant between consecutive smooth numbers, so the partial sum
    runs over those gaps with the telescoped weight ``1/s - 1/s_next``.
    Every term is rounded outward, then ``2**-45`` per term is charged to
    the error budget and folded into both ends.
    """
    basis = as_basis(k)
    _level(L)
    if not tol > 0:
        raise ParameterError("tol must be positive")
    table = pk_table(L - 1, basis, max_states=max_states, workers=workers)
    smooth = list(table)
    density = Fraction(basis.phi_D, basis.D)
    lows, highs = [], []
    for i, s in enumerate(smooth):
        nxt = smooth[i + 1] if i + 1 < len(smooth) else L
        weight = (Fraction(1, s) - Fraction(1, nxt)) * density
        lo, hi = log2_bracket(table[s])
        lows.append(_down(float(Fraction(lo) * weight)))
        highs.append(_up(float(Fraction(hi) * weight)))
    budget = len(lows) * TERM_SLACK
    lower = _down(math.fsum(lows) - budget)
    upper = _up(math.fsum(highs) + budget + tail_bound_log2(k, L, basis, tol))
    return AlphaEnclosure(k=k, L=L, lower_log2=max(lower, 0.0),
                          upper_log2=upper, error_budget=budget)


def decrease_verdict(upper_next: AlphaEnclosure, lower_this: AlphaEnclosure) -> str:
    """``"certified"`` when the intervals prove alpha_{k+1} < alpha_k."""
    if upper_next.upper_log2 < lower_this.lower_log2:
        return "certified"
    return "inconclusive"


def finite_n_gap(n: int, k: int, enclosure: AlphaEnclosure, workers: int = 1) -> float:
    """``|log2 f(n, k) / n - midpoint|``; a convergence diagnostic only."""
    lo, hi = log2_bracket(fnk_product(n, k, workers=workers))
    return abs((lo + hi) / 2 / n - enclosure.midpoint_log2)
