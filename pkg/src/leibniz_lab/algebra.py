"""Algebras given by structure constants.

An :class:`Algebra` is any bilinear product on ``Q^n``; whether it is a
(right) Leibniz algebra is a question answered by :func:`verify_leibniz`, not
an assumption, so corrupted tables can be represented and diagnosed.

Basis indices are 1-based in every public structure (tables, defects, files).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import linalg
from .linalg import LinalgError, Matrix, flint_rref_rows, inverse, rational
from .subspace import Subspace, Vector

Product = tuple[tuple[int, Fraction], ...]

# below this dimension the sparse products beat the flint round trip
_FLINT_MIN_DIM = 6

__all__ = [
    "Algebra",
    "LeibnizDefect",
    "bracket",
    "change_basis",
    "direct_sum",
    "leibniz_defect_at",
    "rebase",
    "left_mult",
    "right_mult",
    "subspace_product",
    "verify_leibniz",
]


def _add_into(acc: dict, vec: Mapping[int, Fraction], c=1):
    for k, v in vec.items():
        w = acc.get(k, 0) + c * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


@dataclass(frozen=True)
class Algebra:
    """Finite-dimensional algebra ``[b_i, b_j] = sum_k c * b_k``.

    ``table`` is sorted by ``(i, j)`` and each product by ``k``, with zero
    coefficients dropped, so equality of algebras is literal equality of
    tables.  Labels and name are presentation only and do not take part in
    comparisons.
    """

    dim: int
    table: tuple[tuple[tuple[int, int], Product], ...]
    labels: tuple[str, ...] = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("negative dimension")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"b{i}" for i in range(1, self.dim + 1)))
        elif len(self.labels) != self.dim:
            raise ValueError(f"{len(self.labels)} labels for dimension {self.dim}")
        keys = [ij for ij, _ in self.table]
        if keys != sorted(set(keys)):
            raise ValueError("table keys must be sorted and unique")
        for (i, j), prod in self.table:
            if not (1 <= i <= self.dim and 1 <= j <= self.dim):
                raise ValueError(f"product index ({i},{j}) outside 1..{self.dim}")
            ks = [k for k, _ in prod]
            if not prod or ks != sorted(set(ks)) or any(c == 0 for _, c in prod):
                raise ValueError(f"product ({i},{j}) is not in canonical form")
            if not all(1 <= k <= self.dim for k in ks):
                raise ValueError(f"product ({i},{j}) has an output index outside 1..{self.dim}")

    @classmethod
    def from_products(cls, dim: int, products: Mapping | Iterable = (), labels: Sequence[str] = (),
                      name: str = "") -> "Algebra":
        """Build from ``{(i, j): {k: c}}`` (or ``(k, c)`` pairs), 1-based.

        Repeated contributions to the same coefficient are summed.
        """
        items = products.items() if isinstance(products, Mapping) else products
        acc: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), value in items:
            pairs = value.items() if isinstance(value, Mapping) else value
            slot = acc.setdefault((int(i), int(j)), {})
            for k, c in pairs:
                _add_into(slot, {int(k): rational(c)})
        table = tuple(((ij, tuple(sorted(v.items()))) for ij, v in sorted(acc.items()) if v))
        return cls(dim, table, tuple(labels), name)

    @classmethod
    def zero(cls, dim: int, labels: Sequence[str] = (), name: str = "") -> "Algebra":
        return cls(dim, (), tuple(labels), name)

    def renamed(self, name: str | None = None, labels: Sequence[str] | None = None) -> "Algebra":
        return Algebra(self.dim, self.table, tuple(labels) if labels is not None else self.labels,
                       self.name if name is None else name)

    def product(self, i: int, j: int) -> Vector:
        """Coordinates of ``[b_i, b_j]`` (1-based indices)."""
        out = [Fraction(0)] * self.dim
        for k, c in self._prod.get((i - 1, j - 1), {}).items():
            out[k] = c
        return tuple(out)

    def is_abelian(self) -> bool:
        return not self.table

    # 0-based sparse views used by the hot loops

    @cached_property
    def _prod(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        return {(i - 1, j - 1): {k - 1: c for k, c in prod} for (i, j), prod in self.table}

    @cached_property
    def _by_left(self) -> list[list[tuple[int, dict[int, Fraction]]]]:
        rows = [[] for _ in range(self.dim)]
        for (i, j), v in self._prod.items():
            rows[i].append((j, v))
        return rows

    @cached_property
    def _by_output(self) -> list[list[tuple[int, int, Fraction]]]:
        outs = [[] for _ in range(self.dim)]
        for (i, j), v in self._prod.items():
            for k, c in v.items():
                outs[k].append((i, j, c))
        return outs

    @cached_property
    def _by_right(self) -> list[list[tuple[int, dict[int, Fraction]]]]:
        cols = [[] for _ in range(self.dim)]
        for (i, j), v in self._prod.items():
            cols[j].append((i, v))
        return cols

    @cached_property
    def _flint_right(self) -> list:
        """``R_{b_k}`` as ``flint.fmpq_mat``; column ``i`` is ``[b_i, b_k]``."""
        fl = linalg.flint
        mats = []
        for k in range(self.dim):
            m = fl.fmpq_mat(self.dim, self.dim)
            for i, prod in self._by_right[k]:
                for r, c in prod.items():
                    m[r, i] = fl.fmpq(c.numerator, c.denominator)
            mats.append(m)
        return mats

    def _flint_right_mult(self, x: Sequence):
        """``R_x`` as a ``flint.fmpq_mat`` (linear in ``x``)."""
        fl = linalg.flint
        out = fl.fmpq_mat(self.dim, self.dim)
        for c, m in zip(x, self._flint_right):
            if c:
                out += fl.fmpq(c.numerator, c.denominator) * m
        return out

    def _mul(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Sparse 0-based bracket ``[u, v]``."""
        out: dict[int, Fraction] = {}
        if len(u) <= len(v):
            for i, a in u.items():
                for j, prod in self._by_left[i]:
                    b = v.get(j)
                    if b:
                        _add_into(out, prod, a * b)
        else:
            for j, b in v.items():
                for i, prod in self._by_right[j]:
                    a = u.get(i)
                    if a:
                        _add_into(out, prod, a * b)
        return out

    def __str__(self):
        lines = [f"{self.name or 'algebra'} (dim {self.dim})"]
        for (i, j), prod in self.table:
            rhs = " + ".join(f"{c}*{self.labels[k - 1]}" if c != 1 else self.labels[k - 1] for k, c in prod)
            lines.append(f"  [{self.labels[i - 1]}, {self.labels[j - 1]}] = {rhs}")
        return "\n".join(lines)


def _sparse(v: Sequence, dim: int) -> dict[int, Fraction]:
    if len(v) != dim:
        raise LinalgError(f"vector of length {len(v)} in an algebra of dimension {dim}")
    return {i: rational(x) for i, x in enumerate(v) if x}


def _dense(v: Mapping[int, Fraction], dim: int) -> Vector:
    out = [Fraction(0)] * dim
    for k, c in v.items():
        out[k] = c
    return tuple(out)


def bracket(a: Algebra, u: Sequence, v: Sequence) -> Vector:
    """Bilinear extension of the table: coordinates of ``[u, v]``."""
    return _dense(a._mul(_sparse(u, a.dim), _sparse(v, a.dim)), a.dim)


@dataclass(frozen=True)
class LeibnizDefect:
    """A basis triple where ``[x,[y,z]] - [[x,y],z] + [[x,z],y]`` is nonzero."""

    triple: tuple[int, int, int]
    value: Vector


def _leibniz_sparse(a: Algebra, x: dict, y: dict, z: dict) -> dict[int, Fraction]:
    out = a._mul(x, a._mul(y, z))
    _add_into(out, a._mul(a._mul(x, y), z), -1)
    _add_into(out, a._mul(a._mul(x, z), y), 1)
    return out


def leibniz_defect_at(a: Algebra, x: Sequence, y: Sequence, z: Sequence) -> Vector:
    """``[x,[y,z]] - [[x,y],z] + [[x,z],y]`` for arbitrary vectors."""
    n = a.dim
    return _dense(_leibniz_sparse(a, _sparse(x, n), _sparse(y, n), _sparse(z, n)), n)


def verify_leibniz(a: Algebra) -> list[LeibnizDefect]:
    """All basis triples violating the right Leibniz identity (empty iff Leibniz)."""
    n = a.dim
    defects = []
    basis = [{i: Fraction(1)} for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                d = _leibniz_sparse(a, basis[i], basis[j], basis[k])
                if d:
                    defects.append(LeibnizDefect((i + 1, j + 1, k + 1), _dense(d, n)))
    return defects


def change_basis(a: Algebra, g: Matrix) -> Algebra:
    """Transport the product along ``g``: ``(g*mu)(x, y) = g mu(g^-1 x, g^-1 y)``.

    ``g`` maps old coordinates to new ones, so the new basis vectors are the
    columns of ``g^-1`` written in the old basis.
    """
    n = a.dim
    if g.shape != (n, n):
        raise LinalgError(f"basis change of shape {g.shape} for dimension {n}")
    p = inverse(g)
    if linalg.flint is not None and n >= _FLINT_MIN_DIM:
        return _flint_change_basis(a, g, p)
    # rows of p: old index i -> [(new index a, p[i][a])]
    p_rows = [[(col, x) for col, x in enumerate(p.row(i)) if x] for i in range(n)]
    g_cols = [[(row, g[row, k]) for row in range(n) if g[row, k]] for k in range(n)]
    acc: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), prod in a._prod.items():
        for ca, pa in p_rows[i]:
            for cb, pb in p_rows[j]:
                _add_into(acc.setdefault((ca, cb), {}), prod, pa * pb)
    products = {}
    for (ca, cb), vec in acc.items():
        out: dict[int, Fraction] = {}
        for k, c in vec.items():
            for row, gk in g_cols[k]:
                _add_into(out, {row: gk * c})
        if out:
            products[(ca + 1, cb + 1)] = {k + 1: c for k, c in out.items()}
    return Algebra.from_products(n, products, a.labels, a.name)


def rebase(a: Algebra, p: Matrix) -> Algebra:
    """Structure constants in the basis whose vectors are the columns of ``p``.

    Equivalent to ``change_basis(a, p^-1)``; this is the form in which explicit
    substitutions such as ``e_i' = 2^i e_i`` are written.
    """
    return change_basis(a, inverse(p))


def direct_sum(a: Algebra, b: Algebra, name: str = "") -> Algebra:
    """Block-diagonal product on the concatenated basis (cross brackets zero)."""
    s = a.dim
    products = {ij: dict(prod) for ij, prod in a.table}
    for (i, j), prod in b.table:
        products[(i + s, j + s)] = {k + s: c for k, c in prod}
    return Algebra.from_products(s + b.dim, products, a.labels + b.labels,
                                 name or f"{a.name or 'A'} + {b.name or 'B'}")


def right_mult(a: Algebra, x: Sequence) -> Matrix:
    """Matrix of ``y -> [y, x]``; column ``j`` holds the image of ``b_(j+1)``."""
    n = a.dim
    xs = _sparse(x, n)
    cols = [_dense(a._mul({j: Fraction(1)}, xs), n) for j in range(n)]
    return Matrix(n, n, tuple(zip(*cols))) if n else Matrix.zeros(0)


def left_mult(a: Algebra, x: Sequence) -> Matrix:
    """Matrix of ``y -> [x, y]``."""
    n = a.dim
    xs = _sparse(x, n)
    cols = [_dense(a._mul(xs, {j: Fraction(1)}), n) for j in range(n)]
    return Matrix(n, n, tuple(zip(*cols))) if n else Matrix.zeros(0)


def _flint_change_basis(a: Algebra, g: Matrix, p: Matrix) -> Algebra:
    # the new R_(b'_c) is g R_(p e_c) p, with b'_c = p e_c in old coordinates
    fg, fp = linalg.to_flint(g), linalg.to_flint(p)
    n = a.dim
    products = {}
    for c, col in enumerate(p.T.entries):
        rows = (fg * a._flint_right_mult(col) * fp).tolist()
        for k in range(n):
            for i in range(n):
                x = rows[k][i]
                if x:
                    products.setdefault((i + 1, c + 1), {})[k + 1] = linalg.from_fmpq(x)
    return Algebra.from_products(n, products, a.labels, a.name)


def subspace_product(a: Algebra, u: Subspace, v: Subspace) -> Subspace:
    """Span of all brackets ``[x, y]`` with ``x`` in ``u`` and ``y`` in ``v``."""
    n = a.dim
    if linalg.flint is not None and n >= _FLINT_MIN_DIM and u.dim and v.dim:
        return _flint_subspace_product(a, u, v)
    us = [_sparse(x, n) for x in u.basis]
    vs = [_sparse(y, n) for y in v.basis]
    return Subspace.span(n, (_dense(a._mul(x, y), n) for x in us for y in vs))


def _flint_subspace_product(a: Algebra, u: Subspace, v: Subspace) -> Subspace:
    fl = linalg.flint
    n = a.dim
    us = fl.fmpq_mat(u.dim, n, [fl.fmpq(x.numerator, x.denominator) for row in u.basis for x in row])
    us = us.transpose()
    rows = []
    for y in v.basis:
        # columns of R_y U are the brackets [u_i, y]
        rows.extend((a._flint_right_mult(y) * us).transpose().tolist())
    return Subspace(n, flint_rref_rows(fl.fmpq_mat(len(rows), n, [x for r in rows for x in r])))
