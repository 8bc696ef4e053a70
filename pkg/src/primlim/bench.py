"""Timing ladder for the three counting engines, with a cross-check of counts."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .antichain import BRANCH_CAP, ORACLE_CAP, count_antichains, count_primitive_subsets_oracle
from .arith import PrimeBasis, enumerate_smooth
from .smoothgrid import SmoothGridCounter

SUITES = {
    "quick": {
        "prefix": (8, 12, 16),
        "grid": ((1, 1000), (2, 100), (2, 1000), (3, 200)),
    },
    "full": {
        "prefix": (8, 12, 16, 20, 24),
        "grid": ((1, 10 ** 6), (2, 100), (2, 1000), (2, 10 ** 5), (3, 200), (3, 3000), (4, 400)),
    },
}


@dataclass(frozen=True)
class Instance:
    name: str
    elements: Optional[Tuple[int, ...]]  # None when too large to list explicitly
    k: Optional[int] = None
    x: Optional[int] = None


def ladder(suite: str) -> List[Instance]:
    cfg = SUITES[suite]
    out = [Instance(f"prefix n={n}", tuple(range(1, n + 1))) for n in cfg["prefix"]]
    for k, x in cfg["grid"]:
        elems = enumerate_smooth(x, PrimeBasis.of(k))
        out.append(Instance(f"smooth k={k} x={x}",
                            tuple(elems) if len(elems) <= BRANCH_CAP else None, k, x))
    return out


def default_engines() -> Dict[str, Callable[[Instance], Optional[int]]]:
    def oracle(inst):
        if inst.elements is None or len(inst.elements) > ORACLE_CAP:
            return None
        return count_primitive_subsets_oracle(inst.elements)

    def branching(inst):
        return None if inst.elements is None else count_antichains(inst.elements)

    def grid(inst):
        if inst.k is None:
            return None
        return SmoothGridCounter(PrimeBasis.of(inst.k)).count(inst.x)

    return {"oracle": oracle, "branching": branching, "grid_dp": grid}


def run_bench(suite: str = "quick",
              engines: Optional[Dict[str, Callable[[Instance], Optional[int]]]] = None,
              ) -> Tuple[List[dict], bool]:
    """Time every applicable engine on every instance.

    Returns one row per (instance, engine) and whether all engines agreed.
    """
    engines = engines or default_engines()
    rows = []
    agree = True
    for inst in ladder(suite):
        seen = set()
        for name, engine in engines.items():
            t0 = time.perf_counter()
            count = engine(inst)
            ms = int(round((time.perf_counter() - t0) * 1000))
            if count is None:
                continue
            seen.add(count)
            rows.append({"instance": inst.name, "engine": name,
                         "count": str(count), "runtime_ms": ms})
        if len(seen) > 1:
            agree = False
    return rows, agree
