"""Exact counting of primitive (divisibility-antichain) subsets.

Two independent routes are provided: :func:`count_primitive_subsets_oracle`
walks every subset, :func:`count_antichains` counts independent sets of the
comparability graph by component splitting and pivot branching with a
memo table.  Singletons always count; only pairs of distinct elements can
conflict.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np

from .arith import PrimeBasis
from .errors import ParameterError, ResourceLimitError

ORACLE_CAP = 25
BRANCH_CAP = 128
KCORE_CAP = 64
DEFAULT_MEMO_ENTRIES = 1 << 20


@dataclass(frozen=True)
class PosetInstance:
    """A finite set of positive integers under proper divisibility."""

    elements: Tuple[int, ...]

    def __post_init__(self):
        _check_elements(self.elements)

    @classmethod
    def of(cls, elements: Iterable[int]) -> "PosetInstance":
        return cls(tuple(sorted(set(elements))))

    def divides(self, i: int, j: int) -> bool:
        """Whether ``elements[i]`` properly divides ``elements[j]``."""
        a, b = self.elements[i], self.elements[j]
        return a != b and b % a == 0

    def comparability_masks(self) -> List[int]:
        return adjacency(self.elements, _divides_pair)


def _check_elements(elements: Sequence[int]) -> None:
    if any(e < 1 for e in elements):
        raise ParameterError("elements must be positive integers")
    if any(a >= b for a, b in zip(elements, elements[1:])):
        raise ParameterError("elements must be distinct and ascending")


def _divides_pair(a: int, b: int) -> bool:
    return b % a == 0


def adjacency(elements: Sequence[int], related: Callable[[int, int], bool]) -> List[int]:
    # related(a, b) is only asked for a < b
    n = len(elements)
    adj = [0] * n
    for i in range(n):
        a = elements[i]
        for j in range(i + 1, n):
            if related(a, elements[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def is_primitive(s: Iterable[int]) -> bool:
    """True if no element of ``s`` properly divides another."""
    xs = sorted(set(s))
    return not any(b % a == 0 for i, a in enumerate(xs) for b in xs[i + 1:])


def count_primitive_subsets_oracle(elements: Sequence[int]) -> int:
    """Count primitive subsets by testing all ``2**len(elements)`` of them."""
    elements = list(elements)
    _check_elements(elements)
    n = len(elements)
    if n > ORACLE_CAP:
        raise ResourceLimitError(f"oracle enumeration capped at {ORACLE_CAP} elements, got {n}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
             if elements[j] % elements[i] == 0]
    total = 0
    chunk = 1 << min(n, 20)
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        bits = [((masks >> i) & 1).astype(bool) for i in range(n)]
        ok = np.ones(chunk, dtype=bool)
        for i, j in pairs:
            ok &= ~(bits[i] & bits[j])
        total += int(ok.sum())
    return total


class _LRUMemo:
    def __init__(self, budget: int):
        self.budget = budget
        self.table: OrderedDict[int, int] = OrderedDict()

    def get(self, key: int):
        val = self.table.get(key)
        if val is not None:
            self.table.move_to_end(key)
        return val

    def put(self, key: int, val: int) -> None:
        if self.budget <= 0:
            return
        self.table[key] = val
        if len(self.table) > self.budget:
            self.table.popitem(last=False)


class IndependentSetCounter:
    """Counts independent sets of a graph given as adjacency bitmasks.

    The memo key is the residual vertex set as a bitmask, which is a
    canonical encoding of the sorted residual element set.
    """

    def __init__(self, adj: Sequence[int], memo_entries: int = DEFAULT_MEMO_ENTRIES):
        self.adj = list(adj)
        self.memo = _LRUMemo(memo_entries)

    def count(self, mask: int | None = None) -> int:
        if mask is None:
            mask = (1 << len(self.adj)) - 1
        return self._count(mask)

    def _components(self, mask: int) -> List[int]:
        adj = self.adj
        comps = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                v = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                new = adj[v] & rest & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def _count(self, mask: int) -> int:
        if mask == 0:
            return 1
        if mask & (mask - 1) == 0:
            return 2
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        comps = self._components(mask)
        if len(comps) > 1:
            result = 1
            for comp in comps:
                result *= self._count(comp)
        else:
            result = self._branch(mask)
        self.memo.put(mask, result)
        return result

    def _branch(self, mask: int) -> int:
        adj = self.adj
        size = mask.bit_count()
        pivot, best = -1, -1
        rest = mask
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            deg = (adj[v] & mask).bit_count()
            if deg > best:
                pivot, best = v, deg
        without = mask & ~(1 << pivot)
        if best == size - 1:
            # pivot is comparable to everything left: only {pivot} adds
            return self._count(without) + 1
        return self._count(without) + self._count(without & ~adj[pivot])


def count_antichains(elements: Sequence[int], memo_entries: int = DEFAULT_MEMO_ENTRIES) -> int:
    """Count subsets of ``elements`` in which no element properly divides another."""
    elements = list(elements)
    _check_elements(elements)
    if len(elements) > BRANCH_CAP:
        raise ResourceLimitError(f"branching counter capped at {BRANCH_CAP} elements")
    return IndependentSetCounter(adjacency(elements, _divides_pair), memo_entries).count()


def kcore_related(basis: PrimeBasis) -> Callable[[int, int], bool]:
    """Pair predicate: ``b / a`` is an integer whose primes all lie in the basis."""

    def related(a: int, b: int) -> bool:
        if b % a:
            return False
        q = b // a
        for p in basis.primes:
            while q % p == 0:
                q //= p
        return q == 1

    return related


def count_kcore_subsets(n: int, basis: PrimeBasis, memo_entries: int = DEFAULT_MEMO_ENTRIES) -> int:
    """Count subsets of ``{1..n}`` with no basis-smooth integer ratio between two members."""
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    if n > KCORE_CAP:
        raise ResourceLimitError(f"direct k-core counter capped at n={KCORE_CAP}")
    adj = adjacency(range(1, n + 1), kcore_related(basis))
    return IndependentSetCounter(adj, memo_entries).count()


def is_kcore(s: Iterable[int], basis: PrimeBasis) -> bool:
    related = kcore_related(basis)
    xs = sorted(set(s))
    return not any(related(a, b) for i, a in enumerate(xs) for b in xs[i + 1:])
