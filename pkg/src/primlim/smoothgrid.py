"""Profile dynamic programming for P_k(x), the number of primitive subsets of
the basis-smooth integers up to x.

Antichains of a finite poset are in bijection with its downsets, so we count
downsets of the exponent grid ``{e : prod p_i**e_i <= x}`` under the
componentwise order.  The grid is swept along the exponent of 2: layer ``a``
holds the odd part ``{m odd-smooth : m <= x >> a}`` and a downset of the whole
grid is a chain of layer downsets ``D_0 ⊇ D_1 ⊇ ...``.  Counting the chains is
a sequence of subset-sum transforms, one per layer.

A layer downset is stored as a height vector: for every cell ``r`` (a number
smooth over the primes after the second), ``h[r]`` is how many powers of the
second prime times ``r`` it contains.  Heights are nonincreasing along
divisibility between cells and bounded by the layer's caps.

Because layer ``a`` of ``2x`` equals layer ``a - 1`` of ``x``, all the values
``P(y), P(2y), P(4y), ...`` come out of one sweep; :func:`pk_table` uses this
to evaluate P at every smooth number below a limit.
"""

from __future__ import annotations

import bisect
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .antichain import BRANCH_CAP, count_antichains
from .arith import PrimeBasis, as_basis, enumerate_smooth
from .errors import ParameterError, ResourceLimitError

DEFAULT_MAX_STATES = 2_000_000


class _Layer:
    """All downsets of one layer, with the index tables for the subset-sum pass."""

    def __init__(self, caps: Tuple[int, ...], preds: List[List[int]],
                 succs: List[List[int]], max_states: int):
        self.caps = caps
        self.states = _enumerate_states(caps, preds, max_states)
        self.index = {s: i for i, s in enumerate(self.states)}
        # one pass per cell, ascending: a cell must be summed before its
        # successors or the intermediate profiles stop being downsets
        self.passes = []
        for c in range(len(caps)):
            levels: Dict[int, Tuple[List[int], List[int]]] = {}
            for i, s in enumerate(self.states):
                h = s[c]
                if h == 0 or any(s[j] > h - 1 for j in succs[c]):
                    continue
                lowered = s[:c] + (h - 1,) + s[c + 1:]
                tgt, src = levels.setdefault(h, ([], []))
                tgt.append(i)
                src.append(self.index[lowered])
            self.passes.append([(np.array(levels[h][0], dtype=np.intp),
                                 np.array(levels[h][1], dtype=np.intp))
                                for h in sorted(levels)])

    def __len__(self):
        return len(self.states)

    def subset_sum(self, g: np.ndarray) -> np.ndarray:
        """``out[D] = sum of g[D']`` over downsets ``D' ⊆ D`` of this layer."""
        g = g.copy()
        for levels in self.passes:
            for tgt, src in levels:
                g[tgt] += g[src]
        return g


def _enumerate_states(caps: Sequence[int], preds: List[List[int]], max_states: int):
    states: List[Tuple[int, ...]] = [()]
    for c, cap in enumerate(caps):
        grown = []
        for s in states:
            top = min([cap] + [s[j] for j in preds[c]])
            for h in range(top + 1):
                grown.append(s + (h,))
        if len(grown) > max_states:
            raise ResourceLimitError(
                f"profile DP layer needs more than {max_states} states")
        states = grown
    return states


class SmoothGridCounter:
    """P_k evaluator for a fixed basis; caches layers across calls."""

    def __init__(self, basis: PrimeBasis, max_states: int = DEFAULT_MAX_STATES):
        self.basis = basis
        self.max_states = max_states
        self.height_prime = basis.primes[1] if basis.k >= 2 else None
        self.cell_primes = basis.primes[2:]
        self._cells: List[int] = [1]
        self._cells_limit = 1
        self._layers: Dict[Tuple[int, ...], _Layer] = {}
        self._embeds: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], np.ndarray] = {}

    def _cells_upto(self, z: int) -> List[int]:
        if z > self._cells_limit:
            self._cells = enumerate_smooth(z, self.cell_primes)
            self._cells_limit = z
        return self._cells[:bisect.bisect_right(self._cells, z)]

    def caps(self, z: int) -> Tuple[int, ...]:
        if z < 1:
            return ()
        hp = self.height_prime
        out = []
        for r in self._cells_upto(z):
            if hp is None:
                out.append(1)
                continue
            h, m = 0, r
            while m <= z:
                h += 1
                m *= hp
            out.append(h)
        return tuple(out)

    def layer(self, caps: Tuple[int, ...]) -> _Layer:
        lay = self._layers.get(caps)
        if lay is None:
            cells = self._cells[:len(caps)]
            pos = {r: i for i, r in enumerate(cells)}
            preds: List[List[int]] = [[] for _ in cells]
            succs: List[List[int]] = [[] for _ in cells]
            for i, r in enumerate(cells):
                for p in self.cell_primes:
                    j = pos.get(r * p)
                    if j is not None:
                        preds[j].append(i)
                        succs[i].append(j)
            lay = _Layer(caps, preds, succs, self.max_states)
            self._layers[caps] = lay
        return lay

    def _embed(self, small: _Layer, big: _Layer) -> np.ndarray:
        key = (small.caps, big.caps)
        emb = self._embeds.get(key)
        if emb is None:
            pad = (0,) * (len(big.caps) - len(small.caps))
            emb = np.array([big.index[s + pad] for s in small.states], dtype=np.intp)
            self._embeds[key] = emb
        return emb

    def sweep(self, zs: Sequence[int], record: Sequence[bool]) -> List[int]:
        """Run the layer chain for ascending layer bounds ``zs``.

        Returns the running downset count after every layer flagged in ``record``.
        """
        prev = self.layer(())
        g = np.array([1], dtype=object)
        out = []
        for z, keep in zip(zs, record):
            lay = self.layer(self.caps(z))
            lifted = np.zeros(len(lay), dtype=object)
            lifted[self._embed(prev, lay)] = g
            g = lay.subset_sum(lifted)
            prev = lay
            if keep:
                out.append(int(g.sum()))
        return out

    def count(self, x: int) -> int:
        if x < 1:
            raise ParameterError(f"x must be positive, got {x}")
        zs = [x >> a for a in range(x.bit_length())][::-1]
        return self.sweep(zs, [False] * (len(zs) - 1) + [True])[0]

    def family(self, y: int, limit: int) -> Dict[int, int]:
        """P at ``y * 2**j`` for every ``j`` with ``y * 2**j <= limit`` (``y`` odd)."""
        below = [y >> t for t in range(1, y.bit_length())][::-1]
        tops = []
        m = y
        while m <= limit:
            tops.append(m)
            m <<= 1
        vals = self.sweep(below + tops, [False] * len(below) + [True] * len(tops))
        return dict(zip(tops, vals))


@lru_cache(maxsize=None)
def _counter(k: int, max_states: int) -> SmoothGridCounter:
    return SmoothGridCounter(PrimeBasis.of(k), max_states)


def count_smooth_primitive(x: int, basis, max_states: int = DEFAULT_MAX_STATES,
                           fallback: bool = True) -> int:
    """P_k(x): primitive subsets of the basis-smooth integers in ``[1, x]``.

    Many primes and small ``x`` give shallow, wide grids whose layers have
    too many downsets; those go to the branching counter when they fit.
    """
    basis = as_basis(basis)
    try:
        return _counter(basis.k, max_states).count(x)
    except ResourceLimitError:
        smooth = enumerate_smooth(x, basis)
        if not fallback or len(smooth) > BRANCH_CAP:
            raise
        return count_antichains(smooth)


def _family_job(args):
    k, max_states, y, limit = args
    return _counter(k, max_states).family(y, limit)


def pk_table(limit: int, basis, max_states: int = DEFAULT_MAX_STATES,
             workers: int = 1) -> Dict[int, int]:
    """P_k(s) for every basis-smooth ``s <= limit``.

    One sweep per odd smooth ``y``; families are independent, so with
    ``workers > 1`` they are farmed out to processes and merged by key.
    """
    basis = as_basis(basis)
    if limit < 1:
        raise ParameterError(f"limit must be positive, got {limit}")
    odd = enumerate_smooth(limit, basis.primes[1:])
    jobs = [(basis.k, max_states, y, limit) for y in odd]
    table: Dict[int, int] = {}
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_family_job, jobs):
                table.update(part)
    else:
        counter = _counter(basis.k, max_states)
        for y in odd:
            table.update(counter.family(y, limit))
    return dict(sorted(table.items()))
