"""Shared fixtures-by-import for the test modules: the sweep grid, cached
algebras, random basis changes and the acceptance scoreboard."""

from __future__ import annotations

import random
import time
import traceback
from contextlib import contextmanager
from functools import lru_cache

from leibniz_lab import catalog
from leibniz_lab.invariants import fingerprint
from leibniz_lab.linalg import Matrix, rank

# criterion number -> {part: (passed, detail)}
SCOREBOARD: dict[int, dict[str, tuple[bool, str]]] = {}
EXPECTED_PARTS = {9: ("a", "b", "c", "d", "e")}


@contextmanager
def criterion(number: int, title: str, part: str = ""):
    """Record the outcome of one acceptance check and print its verdict line."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        reason = traceback.format_exception_only(type(exc), exc)[-1].strip().splitlines()[0]
        SCOREBOARD.setdefault(number, {})[part] = (False, f"{title}: {reason[:160]}")
        print(verdict_line(number))
        raise
    SCOREBOARD.setdefault(number, {})[part] = (True, f"{title} ({time.perf_counter() - start:.1f} s)")
    print(verdict_line(number))


def verdict(number: int) -> bool | None:
    parts = SCOREBOARD.get(number)
    if not parts:
        return None
    if not all(ok for ok, _ in parts.values()):
        return False
    return set(EXPECTED_PARTS.get(number, ("",))) <= set(parts)


def verdict_line(number: int) -> str:
    v = verdict(number)
    word = {True: "PASS", False: "FAIL", None: "INCOMPLETE"}[v]
    details = "; ".join(f"{p + ': ' if p else ''}{d}" for p, (_, d) in sorted(SCOREBOARD.get(number, {}).items()))
    return f"criterion {number:>2}: {word}  {details}"


# the sweep grid: n <= 12 with n - p >= 4, three seeded samples per solvable family

@lru_cache(maxsize=None)
def grid_specs() -> tuple[catalog.CatalogSpec, ...]:
    return tuple(s for family in catalog.FAMILIES for s in catalog.list_family_instances(family))


@lru_cache(maxsize=None)
def algebra(spec: catalog.CatalogSpec):
    return catalog.make(spec)


@lru_cache(maxsize=None)
def cached_fingerprint(spec: catalog.CatalogSpec):
    return fingerprint(algebra(spec))


def random_invertible(n: int, rng: random.Random, lo: int = -2, hi: int = 2) -> Matrix:
    """Dense integer matrix with entries in ``[lo, hi]``, redrawn until invertible."""
    while True:
        m = Matrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)], cols=n)
        if rank(m) == n:
            return m
