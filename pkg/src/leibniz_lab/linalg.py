"""Exact rational linear algebra.

Everything here works over ``fractions.Fraction``; there is no floating point
anywhere.  Dense matrices are small immutable values (:class:`Matrix`); the
large sparse systems assembled by the derivation and cohomology code go through
:class:`RowReducer`, an incremental reduced-row-echelon basis over sparse rows,
or through python-flint's exact integer matrices when the system is dense
enough that fraction arithmetic in Python would dominate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

try:
    import flint
except ImportError:  # pure-Python elimination still works, only slower
    flint = None

Q = Fraction

# dense flint matrices above this many entries cost more memory than they save
FLINT_MAX_ENTRIES = 20_000_000

__all__ = [
    "LinalgError",
    "Matrix",
    "NotNilpotentError",
    "Q",
    "RowReducer",
    "SingularMatrixError",
    "column_rank",
    "inverse",
    "is_nilpotent_matrix",
    "jordan_blocks_nilpotent",
    "nullspace",
    "rank",
    "rational",
    "rref",
    "solve",
    "sparse_kernel",
]


class LinalgError(ValueError):
    pass


class SingularMatrixError(LinalgError):
    pass


class NotNilpotentError(LinalgError):
    pass


def rational(x) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions and strings of the form ``"p"`` or ``"p/q"``.
    Floats are refused: they would smuggle rounding into exact computations.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        num, sep, den = s.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"malformed rational {x!r}") from None
        if q == 0:
            raise ValueError(f"zero denominator in {x!r}")
        return Fraction(p, q)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Matrix:
    """Dense immutable matrix of rationals, stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise LinalgError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(rational(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        if not columns:
            return cls(rows or 0, 0, tuple(() for _ in range(rows or 0)))
        return cls.from_rows(columns).T

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        n = len(values)
        vals = [rational(v) for v in values]
        z = Fraction(0)
        return cls(n, n, tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                      tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = rational(c)
        return Matrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T.entries
        z = Fraction(0)
        out = []
        for r in self.entries:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), z) for c in cols))
        return Matrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product ``self @ v``."""
        if len(v) != self.cols:
            raise LinalgError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        nz = [(k, rational(a)) for k, a in enumerate(v) if a]
        z = Fraction(0)
        return tuple(sum((a * r[k] for k, a in nz), z) for r in self.entries)

    def __pow__(self, e: int) -> "Matrix":
        if not self.is_square:
            raise LinalgError("power of a non-square matrix")
        result = Matrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def flatten(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self.entries for x in r)

    def _check_same_shape(self, other: "Matrix"):
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.entries)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


class RowReducer:
    """Incremental reduced row echelon basis over sparse rows.

    Rows are dicts ``{column: Fraction}`` holding nonzero entries only.  Every
    stored row has a unit pivot and zeros in all other pivot columns, so a new
    row is reduced in one pass.  With ``track=True`` each stored row also
    remembers which inserted rows it combines, and :meth:`insert` returns that
    combination whenever a new row turns out to be dependent; the collected
    combinations then span the left kernel of the inserted rows.
    """

    def __init__(self, ncols: int | None = None, track: bool = False):
        self.ncols = ncols
        self.track = track
        self._rows: dict[int, dict[int, Fraction]] = {}
        self._combos: dict[int, dict[int, Fraction]] = {}
        self._count = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    @property
    def full(self) -> bool:
        return self.ncols is not None and len(self._rows) == self.ncols

    def reduce(self, row: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Return ``row`` minus its projection on the current basis."""
        r, _ = self._reduce(row, None)
        return r

    def _reduce(self, row, combo):
        r = {c: v for c, v in row.items() if v}
        basis = self._rows
        for p in [c for c in r if c in basis]:
            coeff = r[p]
            for c, v in basis[p].items():
                w = r.get(c, 0) - coeff * v
                if w:
                    r[c] = w
                else:
                    r.pop(c, None)
            if combo is not None:
                for c, v in self._combos[p].items():
                    w = combo.get(c, 0) - coeff * v
                    if w:
                        combo[c] = w
                    else:
                        combo.pop(c, None)
        return r, combo

    def insert(self, row: Mapping[int, Fraction]):
        """Add ``row``; return ``None`` if it was independent.

        A dependent row returns the combination of previously inserted rows
        (keyed by insertion index) that it equals, negated so that the returned
        coefficients annihilate: ``sum(c * rows[i]) == 0``.  Without tracking a
        dependent row returns an empty dict.
        """
        idx = self._count
        self._count += 1
        combo = {idx: Fraction(1)} if self.track else None
        r, combo = self._reduce(row, combo)
        if not r:
            return combo if combo is not None else {}
        q = min(r)
        inv = 1 / r[q]
        if inv != 1:
            r = {c: v * inv for c, v in r.items()}
            if combo is not None:
                combo = {c: v * inv for c, v in combo.items()}
        for p, other in self._rows.items():
            coeff = other.get(q)
            if coeff:
                for c, v in r.items():
                    w = other.get(c, 0) - coeff * v
                    if w:
                        other[c] = w
                    else:
                        del other[c]
                if combo is not None:
                    oc = self._combos[p]
                    for c, v in combo.items():
                        w = oc.get(c, 0) - coeff * v
                        if w:
                            oc[c] = w
                        else:
                            del oc[c]
        self._rows[q] = r
        if combo is not None:
            self._combos[q] = combo
        return None

    def contains(self, row: Mapping[int, Fraction]) -> bool:
        return not self.reduce(row)

    def basis(self) -> list[dict[int, Fraction]]:
        """Stored rows ordered by pivot column (reduced row echelon form)."""
        return [dict(self._rows[p]) for p in sorted(self._rows)]


def _dense(row: Mapping[int, Fraction], n: int) -> tuple[Fraction, ...]:
    z = Fraction(0)
    out = [z] * n
    for c, v in row.items():
        out[c] = v
    return tuple(out)


def _sparse(vec: Iterable) -> dict[int, Fraction]:
    return {i: rational(v) for i, v in enumerate(vec) if v}


# below this many entries the conversion to flint costs more than it saves
_FLINT_RREF_MIN_ENTRIES = 256


def rref(vectors: Iterable[Sequence], ncols: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical reduced row echelon basis of the span of ``vectors``."""
    vectors = list(vectors)
    for v in vectors:
        if len(v) != ncols:
            raise LinalgError(f"vector of length {len(v)}, expected {ncols}")
    if flint is not None and len(vectors) * ncols >= _FLINT_RREF_MIN_ENTRIES:
        return _flint_rref(vectors, ncols)
    red = RowReducer(ncols)
    for v in vectors:
        red.insert(_sparse(v))
        if red.full:
            break
    return tuple(_dense(r, ncols) for r in red.basis())


def _flint_rref(vectors: Sequence[Sequence], ncols: int) -> tuple[tuple[Fraction, ...], ...]:
    entries = [_fmpq(rational(x)) for v in vectors for x in v]
    return flint_rref_rows(flint.fmpq_mat(len(vectors), ncols, entries))


def rank(m: Matrix) -> int:
    red = RowReducer(m.cols)
    for r in m.entries:
        red.insert(_sparse(r))
        if red.full:
            break
    return red.rank


def _nullspace_from_rref(rows: Sequence[Mapping[int, Fraction]], ncols: int):
    pivots = [min(r) for r in rows]
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for p, r in zip(pivots, rows):
            c = r.get(f)
            if c:
                v[p] = -c
        out.append(v)
    return out


def nullspace(m: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{v : m v = 0}`` in reduced row echelon form."""
    rows = [_sparse(r) for r in rref(m.entries, m.cols)]
    kernel = _nullspace_from_rref(rows, m.cols)
    return list(rref([_dense(v, m.cols) for v in kernel], m.cols))


def _use_flint(backend: str, nrows: int, ncols: int) -> bool:
    if backend == "python":
        return False
    if backend == "flint":
        if flint is None:
            raise LinalgError("python-flint is not installed")
        return True
    if backend != "auto":
        raise ValueError(f"unknown backend {backend!r}")
    return flint is not None and nrows * ncols <= FLINT_MAX_ENTRIES


def _flint_columns(columns: Sequence[Mapping[int, Fraction]], nrows: int):
    """Integer matrix ``M D`` for the column matrix ``M`` and ``D`` the diagonal of
    per-column denominators; returns it together with ``D``."""
    z = flint.fmpz_mat(nrows, len(columns))
    dens = []
    for j, col in enumerate(columns):
        den = 1
        for v in col.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        for i, v in col.items():
            z[i, j] = v.numerator * (den // v.denominator)
        dens.append(den)
    return z, dens


def _column_height(columns: Sequence[Mapping[int, Fraction]]) -> int:
    return 1 + max((max(col) for col in columns if col), default=-1)


def column_rank(columns: Sequence[Mapping[int, Fraction]], nrows: int | None = None,
                backend: str = "auto") -> int:
    """Rank of the matrix whose columns are the sparse vectors ``columns``."""
    nrows = _column_height(columns) if nrows is None else nrows
    if _use_flint(backend, nrows, len(columns)):
        return _flint_columns(columns, nrows)[0].rank() if columns and nrows else 0
    red = RowReducer()
    for col in columns:
        red.insert(col)
    return red.rank


def sparse_kernel(columns: Sequence[Mapping[int, Fraction]], nvars: int,
                  backend: str = "auto") -> list[dict[int, Fraction]]:
    """Kernel of the linear map whose ``j``-th column is ``columns[j]``.

    The columns are sparse vectors of arbitrary (possibly huge) length.  The
    pure-Python path inserts the columns as rows of a tracking reducer, so only
    the ``nvars`` combinations are ever materialised.  Returns the kernel basis
    in reduced row echelon form as sparse dicts; both backends agree exactly.
    """
    if len(columns) != nvars:
        raise LinalgError(f"{len(columns)} columns for {nvars} unknowns")
    nrows = _column_height(columns)
    canon = RowReducer(nvars)
    if nrows == 0:
        for j in range(nvars):
            canon.insert({j: Fraction(1)})
    elif _use_flint(backend, nrows, nvars):
        z, dens = _flint_columns(columns, nrows)
        basis, nullity = z.nullspace()
        # (M D) v = 0 means D v is in the kernel of M
        vectors = [[int(basis[r, c]) * dens[r] for r in range(nvars)] for c in range(nullity)]
        return [_sparse(v) for v in rref(vectors, nvars)]
    else:
        red = RowReducer(track=True)
        for col in columns:
            dep = red.insert(col)
            if dep is not None:
                canon.insert(dep)
    return canon.basis()


def solve(m: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of ``m x = b`` (free variables set to 0), or None."""
    if len(b) != m.rows:
        raise LinalgError(f"right-hand side of length {len(b)} for {m.rows} rows")
    n = m.cols
    red = RowReducer(n + 1)
    for r, bi in zip(m.entries, b):
        row = _sparse(r)
        bi = rational(bi)
        if bi:
            row[n] = bi
        red.insert(row)
    x = [Fraction(0)] * n
    for r in red.basis():
        p = min(r)
        if p == n:
            return None
        x[p] = r.get(n, Fraction(0))
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise LinalgError("inverse of a non-square matrix")
    n = m.rows
    red = RowReducer(2 * n)
    for i, r in enumerate(m.entries):
        row = _sparse(r)
        row[n + i] = Fraction(1)
        red.insert(row)
    rows = red.basis()
    if len(rows) < n or any(min(r) >= n for r in rows):
        raise SingularMatrixError("matrix is singular")
    return Matrix(n, n, tuple(tuple(r.get(n + j, Fraction(0)) for j in range(n)) for r in rows))


def _power_ranks(m: Matrix) -> list[int]:
    """``rank(m^j)`` for ``j = 0, 1, ...`` until the sequence stops dropping."""
    if not m.is_square:
        raise LinalgError("matrix powers need a square matrix")
    if flint is not None and m.rows:
        return flint_power_ranks(to_flint(m))
    ranks = [m.rows]
    p = Matrix.identity(m.rows)
    # the rank drops strictly until it stabilises, so at most n steps
    while ranks[-1] > 0:
        p = p @ m
        ranks.append(rank(p))
        if ranks[-1] == ranks[-2]:
            break
    return ranks


def flint_power_ranks(fm) -> list[int]:
    """:func:`_power_ranks` for a square ``flint.fmpq_mat``."""
    ranks = [fm.nrows()]
    p = fm
    while ranks[-1] > 0:
        ranks.append(p.rank())
        if ranks[-1] == ranks[-2]:
            break
        p = p * fm
    return ranks


def to_flint(m: Matrix):
    return flint.fmpq_mat(m.rows, m.cols, [_fmpq(x) for row in m.entries for x in row])


def _fmpq(x: Fraction):
    return flint.fmpq(x.numerator, x.denominator)


def from_fmpq(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def flint_rref_rows(fm) -> tuple[tuple[Fraction, ...], ...]:
    """Nonzero rows of the reduced row echelon form of a ``flint.fmpq_mat``."""
    reduced, r = fm.rref()
    return tuple(tuple(from_fmpq(x) for x in row) for row in reduced.tolist()[:r])


def is_nilpotent_matrix(m: Matrix) -> bool:
    if not m.is_square:
        raise LinalgError("nilpotency test needs a square matrix")
    return _power_ranks(m)[-1] == 0


def jordan_blocks_nilpotent(m: Matrix) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent matrix, largest first.

    Uses the rank profile: the number of blocks of size at least ``j`` is
    ``rank(m^(j-1)) - rank(m^j)``.
    """
    if not m.is_square:
        raise LinalgError("Jordan type needs a square matrix")
    return blocks_from_power_ranks(_power_ranks(m))


def blocks_from_power_ranks(ranks: Sequence[int]) -> tuple[int, ...]:
    """Jordan type from ``rank(m^0), rank(m^1), ...`` ending in 0, largest first."""
    if ranks[-1]:
        raise NotNilpotentError("Jordan type requested for a non-nilpotent matrix")
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    blocks = []
    for size in range(len(at_least), 0, -1):
        exact = at_least[size - 1] - (at_least[size] if size < len(at_least) else 0)
        blocks.extend([size] * exact)
    return tuple(blocks)
