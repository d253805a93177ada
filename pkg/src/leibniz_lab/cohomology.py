"""Second Leibniz cohomology of an algebra with coefficients in itself.

A 2-cochain is a bilinear map ``phi``; coordinate ``(l*n + m)*n + r`` (0-based)
is the ``b_r`` component of ``phi(b_l, b_m)``.  The cocycle condition is

    [a,phi(b,c)] - [phi(a,b),c] + [phi(a,c),b]
        + phi(a,[b,c]) - phi([a,b],c) + phi([a,c],b) = 0

on all basis triples, and coboundaries are ``f(a,b) = [da,b] + [a,db] - d[a,b]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import Algebra, verify_leibniz
from .derivations import derivation_system_columns
from .linalg import RowReducer, column_rank

__all__ = [
    "CohomologyError",
    "CohomologyReport",
    "coboundary_basis",
    "coboundary_dim",
    "cocycle_dim",
    "cocycle_system_columns",
    "cohomology",
    "d2",
    "is_cocycle",
]

# n^4 x n^3 dense systems beyond this go through the sparse reducer instead
_COCYCLE_FLINT_ENTRIES = 5_000_000


class CohomologyError(ValueError):
    pass


def _require_leibniz(a: Algebra):
    defects = verify_leibniz(a)
    if defects:
        raise CohomologyError(f"not a Leibniz algebra: {len(defects)} defective triples, "
                              f"first at {defects[0].triple}")


def _cocycle_column(a: Algebra, l: int, m: int, r: int) -> dict[int, Fraction]:
    """``d2`` of the cochain ``phi(b_l, b_m) = b_r`` (all 0-based)."""
    n = a.dim
    col: dict[int, Fraction] = {}

    def add(a_, b_, c_, s, v):
        key = ((a_ * n + b_) * n + c_) * n + s
        col[key] = col.get(key, 0) + v

    for i, prod in a._by_right[r]:          # [b_i, phi(b_l, b_m)]
        for s, v in prod.items():
            add(i, l, m, s, v)
    for j, prod in a._by_left[r]:
        for s, v in prod.items():
            add(l, m, j, s, -v)             # -[phi(b_l, b_m), b_j]
            add(l, j, m, s, v)              # +[phi(b_l, b_m), b_j] as the (a,c),b term
    for b_, c_, v in a._by_output[m]:       # +phi(b_l, [b_b, b_c])
        add(l, b_, c_, r, v)
    for a_, b_, v in a._by_output[l]:
        add(a_, b_, m, r, -v)               # -phi([b_a, b_b], b_m)
        add(a_, m, b_, r, v)                # +phi([b_a, b_c], b_m) with c = b
    return {k: v for k, v in col.items() if v}


def cocycle_system_columns(a: Algebra) -> list[dict[int, Fraction]]:
    """All ``n^3`` columns of ``d2``, row ``((a*n + b)*n + c)*n + s``."""
    n = a.dim
    return [_cocycle_column(a, l, m, r) for l in range(n) for m in range(n) for r in range(n)]


def d2(a: Algebra, phi: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """``d2 phi`` as a sparse vector, touching only the support of ``phi``."""
    n = a.dim
    out: dict[int, Fraction] = {}
    for idx, c in phi.items():
        if not c:
            continue
        lm, r = divmod(idx, n)
        l, m = divmod(lm, n)
        for k, v in _cocycle_column(a, l, m, r).items():
            w = out.get(k, 0) + c * v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def is_cocycle(a: Algebra, phi: Mapping[int, Fraction]) -> bool:
    return not d2(a, phi)


def cocycle_dim(a: Algebra, backend: str = "auto") -> int:
    """``dim ZL^2(a, a)``: ``n^3`` minus the rank of ``d2``."""
    _require_leibniz(a)
    n = a.dim
    cols = cocycle_system_columns(a)
    if backend == "auto" and n ** 7 > _COCYCLE_FLINT_ENTRIES:
        backend = "python"
    return n ** 3 - column_rank(cols, n ** 4, backend)


def coboundary_dim(a: Algebra, backend: str = "auto") -> int:
    """``dim BL^2(a, a)``: rank of ``d -> [d., .] + [., d.] - d[., .]``."""
    _require_leibniz(a)
    n = a.dim
    return column_rank(derivation_system_columns(a), n ** 3, backend)


def coboundary_basis(a: Algebra) -> list[dict[int, Fraction]]:
    """Reduced row echelon basis of ``BL^2`` as sparse cochains."""
    _require_leibniz(a)
    red = RowReducer(a.dim ** 3)
    for col in derivation_system_columns(a):
        red.insert(col)
    return red.basis()


@dataclass(frozen=True)
class CohomologyReport:
    """``rigidity`` is ``"certified_rigid"`` when ``HL^2 = 0`` and ``"unknown"``
    otherwise; vanishing is sufficient for rigidity, not necessary."""

    dim_zl2: int
    dim_bl2: int
    dim_hl2: int
    rigidity: str

    def as_dict(self) -> dict:
        return {"dim_zl2": self.dim_zl2, "dim_bl2": self.dim_bl2,
                "dim_hl2": self.dim_hl2, "rigidity": self.rigidity}


def cohomology(a: Algebra, backend: str = "auto") -> CohomologyReport:
    z = cocycle_dim(a, backend)
    b = coboundary_dim(a, backend)
    if b > z:
        raise CohomologyError(f"coboundaries ({b}) exceed cocycles ({z})")
    h = z - b
    return CohomologyReport(z, b, h, "certified_rigid" if h == 0 else "unknown")
