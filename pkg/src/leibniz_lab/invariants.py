"""Basis-free invariants: series, annihilators, characteristic sequences.

All subspaces are returned as :class:`Subspace` values in the coordinates of
the algebra's own basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, change_basis, left_mult, right_mult, subspace_product
from .derivations import derivation_space
from . import linalg
from .linalg import (LinalgError, Matrix, _power_ranks, blocks_from_power_ranks, flint_power_ranks, inverse,
                     nullspace, rational)
from .subspace import Subspace, Vector, unit

__all__ = [
    "CharSeq",
    "Fingerprint",
    "InvariantError",
    "NilradicalVerdict",
    "Status",
    "associated_graded",
    "center",
    "char_seq_at",
    "char_seq_max",
    "check_nilradical_candidate",
    "derived_series",
    "fingerprint",
    "generated_ideal",
    "is_p_filiform",
    "lower_central_series",
    "nilpotency_status",
    "right_annihilator",
    "solvability_status",
    "subalgebra_is_nilpotent",
]

CharSeq = tuple[int, ...]


class InvariantError(ValueError):
    pass


def _stabilise(first: Subspace, step) -> list[Subspace]:
    terms = [first]
    while terms[-1].dim:
        nxt = step(terms[-1])
        terms.append(nxt)
        if nxt == terms[-2]:
            break
    return terms


def lower_central_series(a: Algebra) -> list[Subspace]:
    """``L^1 = L``, ``L^(k+1) = [L^k, L]``, through the first zero or repeated term."""
    whole = Subspace.whole(a.dim)
    return _stabilise(whole, lambda s: subspace_product(a, s, whole))


def derived_series(a: Algebra) -> list[Subspace]:
    """``L^[1] = L``, ``L^[s+1] = [L^[s], L^[s]]``, through the first zero or repeated term."""
    return _stabilise(Subspace.whole(a.dim), lambda s: subspace_product(a, s, s))


@dataclass(frozen=True)
class Status:
    """``index`` is the length ``m`` with ``L^m = 0`` (None when the series stalls)."""

    holds: bool
    index: int | None = None


def _status(series: list[Subspace]) -> Status:
    if series[-1].dim == 0:
        return Status(True, len(series))
    return Status(False, None)


def nilpotency_status(a: Algebra) -> Status:
    return _status(lower_central_series(a))


def solvability_status(a: Algebra) -> Status:
    return _status(derived_series(a))


def _stacked_kernel(mats: Sequence[Matrix], n: int) -> Subspace:
    rows = [r for m in mats for r in m.entries if any(r)]
    if not rows:
        return Subspace.whole(n)
    return Subspace(n, tuple(nullspace(Matrix.from_rows(rows, cols=n))))


def right_annihilator(a: Algebra) -> Subspace:
    """``{v : [b_i, v] = 0 for all i}``."""
    n = a.dim
    return _stacked_kernel([left_mult(a, unit(n, i)) for i in range(1, n + 1)], n)


def center(a: Algebra) -> Subspace:
    """``{v : [v, b_i] = [b_i, v] = 0 for all i}``."""
    n = a.dim
    mats = [f(a, unit(n, i)) for i in range(1, n + 1) for f in (left_mult, right_mult)]
    return _stacked_kernel(mats, n)


# characteristic sequence ------------------------------------------------------

def _square(a: Algebra) -> Subspace:
    whole = Subspace.whole(a.dim)
    return subspace_product(a, whole, whole)


def char_seq_at(a: Algebra, x: Sequence) -> CharSeq:
    """Jordan type of ``R_x : y -> [y, x]``, blocks largest first."""
    return _char_seq_at(a, x, _square(a))


def _char_seq_at(a: Algebra, x: Sequence, square: Subspace) -> CharSeq:
    if square.contains(x):
        raise InvariantError("characteristic sequence needs x outside L^2")
    if linalg.flint is not None and a.dim:
        ranks = flint_power_ranks(a._flint_right_mult([rational(c) for c in x]))
    else:
        ranks = _power_ranks(right_mult(a, x))
    if ranks[-1]:
        raise InvariantError("right multiplication by x is not nilpotent")
    return blocks_from_power_ranks(ranks)


def char_seq_max(a: Algebra, extra_candidates: int = 8, seed: int = 0) -> CharSeq:
    """Lexicographic maximum of :func:`char_seq_at` over a fixed candidate set.

    Candidates: basis vectors outside ``L^2``, pairwise sums of those that
    stay outside ``L^2``, then ``extra_candidates`` random combinations with
    integer coefficients in ``[-5, 5]`` drawn from ``random.Random(seed)``.
    This is a lower bound on the true maximum; a generic element attains it.
    """
    if not nilpotency_status(a).holds:
        raise InvariantError("characteristic sequence of a non-nilpotent algebra")
    n = a.dim
    if n == 0:
        return ()
    square = _square(a)
    outside = [i for i in range(1, n + 1) if not square.contains(unit(n, i))]
    cands: list[Vector] = [unit(n, i) for i in outside]
    for p, i in enumerate(outside):
        for j in outside[p + 1:]:
            cands.append(tuple(u + v for u, v in zip(unit(n, i), unit(n, j))))
    rng = random.Random(seed)
    for _ in range(extra_candidates):
        cands.append(tuple(Fraction(rng.randint(-5, 5)) for _ in range(n)))
    best: CharSeq = ()
    for x in cands:
        if square.contains(x):
            continue
        best = max(best, _char_seq_at(a, x, square))
    return best


def is_p_filiform(a: Algebra, p: int, extra_candidates: int = 8, seed: int = 0) -> bool:
    """``C(L) == (n - p, 1, ..., 1)``."""
    n = a.dim
    if not 0 <= p < n:
        return False
    return char_seq_max(a, extra_candidates, seed) == (n - p,) + (1,) * p


# associated graded ------------------------------------------------------------

def associated_graded(a: Algebra) -> Algebra:
    """``gr L`` for the lower central series filtration.

    The basis is adapted: degree ``i`` vectors extend a basis of ``L^(i+1)``
    to one of ``L^i``.  The bracket of degree ``i`` and ``j`` vectors keeps
    only the degree ``i + j`` part of the original bracket.
    """
    series = lower_central_series(a)
    if series[-1].dim:
        raise InvariantError("associated graded algebra of a non-nilpotent algebra")
    n = a.dim
    if n == 0:
        return a
    columns: list[Vector] = []
    degree: list[int] = []
    # walk from the deepest term up so each layer extends the one below
    for i in range(len(series) - 2, -1, -1):
        below = Subspace.span(n, columns)
        for v in series[i].basis:
            if not below.contains(v):
                columns.append(v)
                degree.append(i + 1)
                below = below + Subspace.span(n, [v])
    order = sorted(range(n), key=lambda c: degree[c])
    columns = [columns[c] for c in order]
    degree = [degree[c] for c in order]
    adapted = change_basis(a, inverse(Matrix.from_columns(columns)))
    products = {}
    for (i, j), prod in adapted.table:
        kept = {k: c for k, c in prod if degree[k - 1] == degree[i - 1] + degree[j - 1]}
        if kept:
            products[(i, j)] = kept
    labels = tuple(f"g{d}_{c + 1}" for c, d in enumerate(degree))
    return Algebra.from_products(n, products, labels, f"gr({a.name})" if a.name else "gr")


# fingerprint ------------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    dim: int
    lcs_dims: tuple[int, ...]
    ds_dims: tuple[int, ...]
    dim_ann_r: int
    dim_center: int
    dim_der: int
    char_seq: CharSeq | None
    nilpotent: bool
    solvable: bool

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "lcs_dims": list(self.lcs_dims),
            "ds_dims": list(self.ds_dims),
            "dim_ann_r": self.dim_ann_r,
            "dim_center": self.dim_center,
            "dim_der": self.dim_der,
            "char_seq": None if self.char_seq is None else list(self.char_seq),
            "nilpotent": self.nilpotent,
            "solvable": self.solvable,
        }


def fingerprint(a: Algebra, extra_candidates: int = 8, seed: int = 0) -> Fingerprint:
    """Isomorphism invariants; equal fingerprints do not imply isomorphism."""
    lcs = lower_central_series(a)
    ds = derived_series(a)
    nilpotent = lcs[-1].dim == 0
    return Fingerprint(
        dim=a.dim,
        lcs_dims=tuple(s.dim for s in lcs),
        ds_dims=tuple(s.dim for s in ds),
        dim_ann_r=right_annihilator(a).dim,
        dim_center=center(a).dim,
        dim_der=derivation_space(a).dim,
        char_seq=char_seq_max(a, extra_candidates, seed) if nilpotent else None,
        nilpotent=nilpotent,
        solvable=ds[-1].dim == 0,
    )


# nilradical verification ------------------------------------------------------

def generated_ideal(a: Algebra, gens: Subspace) -> Subspace:
    """Smallest two-sided ideal containing ``gens``."""
    whole = Subspace.whole(a.dim)
    ideal = gens
    while True:
        grown = ideal + subspace_product(a, ideal, whole) + subspace_product(a, whole, ideal)
        if grown == ideal:
            return ideal
        ideal = grown


def subalgebra_is_nilpotent(a: Algebra, s: Subspace) -> bool:
    """Lower central series of ``s`` taken inside ``s`` reaches zero.

    Assumes ``s`` is closed under the bracket.
    """
    term = s
    for _ in range(s.dim + 1):
        if term.dim == 0:
            return True
        nxt = subspace_product(a, term, s)
        if nxt == term:
            return False
        term = nxt
    return term.dim == 0


@dataclass(frozen=True)
class NilradicalVerdict:
    """Checks on a proposed nilradical ``N``.

    ``maximal`` is the one-direction probe: for every standard basis vector
    completing ``N``, the ideal generated by ``N`` and that vector is not
    nilpotent.  It is sufficient-only evidence of maximality.  When ``N`` is
    the whole algebra there are no directions and ``vacuous`` is set.
    """

    is_ideal: bool
    is_nilpotent: bool
    maximal: bool
    vacuous: bool
    failing_directions: tuple[int, ...] = ()

    @property
    def all_hold(self) -> bool:
        return self.is_ideal and self.is_nilpotent and self.maximal


def check_nilradical_candidate(a: Algebra, n_sub: Subspace) -> NilradicalVerdict:
    if n_sub.ambient_dim != a.dim:
        raise LinalgError(f"subspace of Q^{n_sub.ambient_dim} in an algebra of dimension {a.dim}")
    whole = Subspace.whole(a.dim)
    is_ideal = subspace_product(a, n_sub, whole) <= n_sub and subspace_product(a, whole, n_sub) <= n_sub
    is_nil = is_ideal and subalgebra_is_nilpotent(a, n_sub)
    directions = n_sub.complement_units()
    failing = []
    for i in directions:
        ideal = generated_ideal(a, n_sub + Subspace.coordinate(a.dim, [i]))
        if subalgebra_is_nilpotent(a, ideal):
            failing.append(i)
    return NilradicalVerdict(is_ideal, is_nil, not failing, not directions, tuple(failing))
