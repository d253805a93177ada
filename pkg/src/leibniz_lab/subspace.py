"""Linear subspaces of an algebra, kept in canonical echelon form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import LinalgError, rational, rref

Vector = tuple[Fraction, ...]


def unit(n: int, i: int, c=1) -> Vector:
    """The vector ``c * b_i`` (``i`` is 1-based) in an ``n``-dimensional space."""
    z = Fraction(0)
    v = [z] * n
    v[i - 1] = rational(c)
    return tuple(v)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


@dataclass(frozen=True)
class Subspace:
    """Subspace of ``Q^ambient_dim`` given by its reduced row echelon basis.

    Because the basis is canonical, two subspaces are equal exactly when their
    dataclass fields are equal.
    """

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [tuple(rational(x) for x in v) for v in vectors]
        return cls(ambient_dim, rref(vecs, ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def whole(cls, ambient_dim: int) -> "Subspace":
        return cls.span(ambient_dim, (unit(ambient_dim, i) for i in range(1, ambient_dim + 1)))

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Iterable[int]) -> "Subspace":
        """Span of the basis vectors with the given 1-based indices."""
        return cls.span(ambient_dim, (unit(ambient_dim, i) for i in indices))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def pivots(self) -> list[int]:
        """0-based pivot columns of the echelon basis."""
        return [next(i for i, x in enumerate(v) if x) for v in self.basis]

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise LinalgError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        w = [rational(x) for x in v]
        for row, p in zip(self.basis, self.pivots()):
            c = w[p]
            if c:
                w = [a - c * b for a, b in zip(w, row)]
        return not any(w)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise LinalgError("sum of subspaces of different ambient spaces")
        return Subspace.span(self.ambient_dim, self.basis + other.basis)

    def complement_units(self) -> list[int]:
        """1-based indices of standard basis vectors spanning a complement."""
        piv = set(self.pivots())
        return [i + 1 for i in range(self.ambient_dim) if i not in piv]
