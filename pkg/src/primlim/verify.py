"""Mechanical check of the finitary inequalities relating f(n) and f(n, k)."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .antichain import count_kcore_subsets, is_primitive, kcore_related, adjacency
from .arith import PrimeBasis
from .errors import ParameterError
from .limits import fiber_exponent, fn_exact, fnk_product, removal_map

MAX_N = 40
MAX_K = 3
REMOVAL_MAX_N = 20


@dataclass(frozen=True)
class Check:
    name: str
    params: Tuple[int, ...]
    passed: bool
    witness: Dict[str, int] = field(default_factory=dict)


@dataclass
class VerificationReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, params: Tuple[int, ...], passed: bool, **witness: int) -> None:
        self.checks.append(Check(name, params, bool(passed), witness))


def kcore_subsets(n: int, basis: PrimeBasis) -> Iterator[frozenset]:
    """Every k-core subset of ``{1..n}``, by backtracking over ``n, n-1, ..., 1``."""
    adj = adjacency(range(1, n + 1), kcore_related(basis))

    def walk(i: int, chosen: int, blocked: int):
        if i < 0:
            yield frozenset(j + 1 for j in range(n) if chosen >> j & 1)
            return
        yield from walk(i - 1, chosen, blocked)
        if not blocked >> i & 1:
            yield from walk(i - 1, chosen | 1 << i, blocked | adj[i])

    yield from walk(n - 1, 0, 0)


def verify_inequalities(
    n_max: int,
    k_max: int,
    fn: Optional[Callable[[int], int]] = None,
    fnk: Optional[Callable[[int, int], int]] = None,
) -> VerificationReport:
    """Run every check for ``1 <= n <= n_max`` and ``1 <= k <= k_max``.

    ``fn(n)`` and ``fnk(n, k)`` default to the exact branching counters;
    they are injectable so a harness can feed in deliberately wrong values.
    Failures are recorded with the offending counts, never raised.
    """
    if not 1 <= n_max <= MAX_N:
        raise ParameterError(f"n_max must be in [1, {MAX_N}]")
    if not 1 <= k_max <= MAX_K:
        raise ParameterError(f"k_max must be in [1, {MAX_K}]")
    fn = fn or fn_exact
    fnk = fnk or (lambda n, k: count_kcore_subsets(n, PrimeBasis.of(k)))

    report = VerificationReport()
    f = {n: fn(n) for n in range(1, n_max + 1)}
    g = {(n, k): fnk(n, k) for n in range(1, n_max + 1) for k in range(1, k_max + 2)}

    for n in range(1, n_max + 1):
        lo, hi = 2 ** math.ceil(n / 2), 2 ** n
        report.add("sandwich", (n,), lo <= f[n] <= hi, f=f[n], lower=lo, upper=hi)
        for k in range(1, k_max + 1):
            fk, fk1 = g[n, k], g[n, k + 1]
            report.add("f_le_fnk", (n, k), f[n] <= fk, f=f[n], fnk=fk)
            report.add("fnk_decreasing_in_k", (n, k), fk1 <= fk, fnk=fk, fnk_next=fk1)
            m = fiber_exponent(n, k)
            report.add("fiber_bound", (n, k), fk <= 2 ** m * f[n], fnk=fk, m=m, f=f[n])
            prod = fnk_product(n, k)
            report.add("decomposition", (n, k), prod == fk, product=prod, fnk=fk)

    for n in range(1, min(n_max, REMOVAL_MAX_N) + 1):
        for k in range(1, k_max + 1):
            _check_removal(report, n, k)
    return report


def _check_removal(report: VerificationReport, n: int, k: int) -> None:
    basis = PrimeBasis.of(k)
    m = fiber_exponent(n, k)
    fibers: Counter = Counter()
    bad = None
    for s in kcore_subsets(n, basis):
        image = frozenset(removal_map(s, n, k))
        if bad is None and not is_primitive(image):
            bad = s
        fibers[image] += 1
    biggest = max(fibers.values())
    witness = {"max_fiber": biggest, "m": m, "images": len(fibers)}
    if bad is not None:
        witness["bad_set_mask"] = sum(1 << (e - 1) for e in bad)
    report.add("removal_map", (n, k), bad is None and biggest <= 2 ** m, **witness)
