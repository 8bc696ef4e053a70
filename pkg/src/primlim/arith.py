"""Number-theoretic primitives over a basis of the first k primes.

Everything here works on plain Python ints, so ``D`` and ``phi_D`` stay exact
for any basis size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

from .errors import ParameterError

MAX_BASIS = 64


def first_primes(k: int) -> List[int]:
    """Return the first ``k`` primes in ascending order (1 <= k <= 64)."""
    if not isinstance(k, int) or k < 1 or k > MAX_BASIS:
        raise ParameterError(f"k must be in [1, {MAX_BASIS}], got {k!r}")
    primes: List[int] = []
    cand = 2
    while len(primes) < k:
        if all(cand % p for p in primes if p * p <= cand):
            primes.append(cand)
        cand += 1
    return primes


@dataclass(frozen=True)
class PrimeBasis:
    k: int
    primes: Tuple[int, ...]
    D: int
    phi_D: int

    @classmethod
    def of(cls, k: int) -> "PrimeBasis":
        return _basis(k)

    def is_smooth(self, m: int) -> bool:
        return smooth_rough_split(m, self).rough_part == 1


@lru_cache(maxsize=None)
def _basis(k: int) -> PrimeBasis:
    primes = tuple(first_primes(k))
    return PrimeBasis(k=k, primes=primes, D=math.prod(primes),
                      phi_D=math.prod(p - 1 for p in primes))


def as_basis(basis_or_k) -> PrimeBasis:
    if isinstance(basis_or_k, PrimeBasis):
        return basis_or_k
    return PrimeBasis.of(basis_or_k)


@dataclass(frozen=True)
class SmoothDecomposition:
    m: int
    smooth_part: int
    rough_part: int


def smooth_rough_split(m: int, basis: PrimeBasis) -> SmoothDecomposition:
    """Split ``m = a * R`` with ``a`` basis-smooth and ``gcd(R, D) = 1``."""
    if m < 1:
        raise ParameterError(f"m must be positive, got {m}")
    rough = m
    for p in basis.primes:
        while rough % p == 0:
            rough //= p
    return SmoothDecomposition(m=m, smooth_part=m // rough, rough_part=rough)


def enumerate_smooth(x: int, basis: PrimeBasis | Sequence[int]) -> List[int]:
    """All integers in ``[1, x]`` whose prime factors lie in the basis, ascending.

    Generated as products of prime powers, never by scanning ``1..x``.
    """
    if x < 1:
        raise ParameterError(f"x must be positive, got {x}")
    primes = basis.primes if isinstance(basis, PrimeBasis) else tuple(basis)
    out = [1]
    for p in primes:
        grown = []
        for m in out:
            while m <= x:
                grown.append(m)
                m *= p
        out = grown
    out.sort()
    return out


def largest_smooth_at_most(x: int, basis: PrimeBasis) -> int:
    """The largest basis-smooth integer not exceeding ``x``."""
    if x < 1:
        raise ParameterError(f"x must be positive, got {x}")
    best = 1

    def walk(i: int, m: int) -> None:
        nonlocal best
        if i == len(basis.primes):
            best = max(best, m)
            return
        p = basis.primes[i]
        while m <= x:
            walk(i + 1, m)
            m *= p

    walk(0, 1)
    return best


def _prime_factors(D: int) -> List[int]:
    out = []
    d = 2
    while d * d <= D:
        if D % d == 0:
            out.append(d)
            while D % d == 0:
                D //= d
        d += 1
    if D > 1:
        out.append(D)
    return out


def _inclusion_exclusion(lo: int, hi: int, primes: Sequence[int]) -> int:
    below = lo - 1
    total = 0

    def walk(i: int, d: int, sign: int) -> None:
        nonlocal total
        total += sign * (hi // d - below // d)
        for j in range(i, len(primes)):
            nd = d * primes[j]
            if nd > hi:
                break
            walk(j + 1, nd, -sign)

    walk(0, 1, 1)
    return total


def coprime_count(lo: int, hi: int, D: int) -> int:
    """Number of ``R`` in ``[lo, hi]`` with ``gcd(R, D) == 1``.

    Exact inclusion-exclusion over squarefree divisors of ``D``; divisors
    larger than ``hi`` contribute nothing and are pruned.
    """
    if lo > hi:
        raise ParameterError(f"empty interval [{lo}, {hi}]")
    if lo < 1 or D < 1:
        raise ParameterError("lo and D must be positive")
    return _inclusion_exclusion(lo, hi, _prime_factors(D))


def coprime_count_for(lo: int, hi: int, basis: PrimeBasis) -> int:
    # same count, but the primes of D are already known
    if lo > hi:
        raise ParameterError(f"empty interval [{lo}, {hi}]")
    return _inclusion_exclusion(lo, hi, basis.primes)
