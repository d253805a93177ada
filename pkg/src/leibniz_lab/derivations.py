"""Derivations, nil-independence and solvable extensions ``R = N + Q``."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import Algebra, LeibnizDefect, _dense, left_mult, right_mult, verify_leibniz
from .linalg import LinalgError, Matrix, is_nilpotent_matrix, nullspace, rational, sparse_kernel
from .subspace import Subspace, Vector

__all__ = [
    "DerivationBasis",
    "Extension",
    "ExtensionError",
    "ExtensionSpec",
    "NilIndependence",
    "build_extension",
    "characteristic_polynomial",
    "derivation_space",
    "derivation_system_columns",
    "extension_data",
    "is_derivation",
    "left_mult",
    "nil_independence",
    "rational_roots",
    "right_mult",
]


class ExtensionError(ValueError):
    pass


def is_derivation(a: Algebra, d: Matrix) -> bool:
    """Check ``d[x,y] = [dx,y] + [x,dy]`` on all basis pairs.

    ``d`` acts on coordinate columns: column ``j`` is the image of ``b_(j+1)``.
    """
    n = a.dim
    if d.shape != (n, n):
        raise LinalgError(f"derivation candidate of shape {d.shape} for dimension {n}")
    images = [{i: d[i, j] for i in range(n) if d[i, j]} for j in range(n)]
    for i in range(n):
        for j in range(n):
            lhs: dict[int, Fraction] = {}
            for k, c in a._prod.get((i, j), {}).items():
                for r, v in images[k].items():
                    lhs[r] = lhs.get(r, 0) + c * v
            rhs = a._mul(images[i], {j: Fraction(1)})
            for r, v in a._mul({i: Fraction(1)}, images[j]).items():
                rhs[r] = rhs.get(r, 0) + v
            keys = set(lhs) | set(rhs)
            if any(lhs.get(r, 0) != rhs.get(r, 0) for r in keys):
                return False
    return True


def _derivation_terms(a: Algebra):
    """Raw ``(row, unknown, coefficient)`` contributions; repeats must be summed."""
    n = a.dim
    for l in range(n):
        left = a._by_left[l]     # [b_l, b_j]
        right = a._by_right[l]   # [b_i, b_l]
        for m in range(n):
            col = l * n + m
            for j, prod in left:
                base = (m * n + j) * n
                for k, c in prod.items():
                    yield base + k, col, c
            for i, prod in right:
                base = (i * n + m) * n
                for k, c in prod.items():
                    yield base + k, col, c
            for i, j, c in a._by_output[m]:
                yield (i * n + j) * n + l, col, -c


def derivation_system_columns(a: Algebra) -> list[dict[int, Fraction]]:
    """Columns of the linear map ``d -> ([dx,y] + [x,dy] - d[x,y])`` on basis pairs.

    Unknown ``l*n + m`` is the entry ``d[l][m]`` (coefficient of ``b_l`` in
    ``d(b_m)``); output coordinate ``(i*n + j)*n + k`` is the ``b_k`` component
    of the value on ``(b_i, b_j)``, all 0-based.  The kernel is ``Der(a)``;
    read as bilinear maps, the columns span the 2-coboundaries.
    """
    cols: list[dict[int, Fraction]] = [{} for _ in range(a.dim ** 2)]
    for row, col, c in _derivation_terms(a):
        target = cols[col]
        target[row] = target.get(row, 0) + c
    return [{key: v for key, v in col.items() if v} for col in cols]


def _integer_multiple(a: Algebra) -> Algebra:
    """``a`` with its product scaled to integer structure constants."""
    den = math.lcm(*(c.denominator for _, prod in a.table for _, c in prod))
    if den == 1:
        return a
    return Algebra.from_products(a.dim, {ij: {k: c * den for k, c in prod} for ij, prod in a.table})


def _flint_derivation_kernel(a: Algebra) -> list[dict[int, Fraction]]:
    # scaling the product by a nonzero constant does not change Der
    b = _integer_multiple(a)
    n = a.dim
    width = n * n
    flat = [0] * (n ** 3 * width)
    for row, col, c in _derivation_terms(b):
        flat[row * width + col] += c.numerator
    basis, nullity = linalg.flint.fmpz_mat(n ** 3, width, flat).nullspace()
    vectors = [[int(basis[r, c]) for r in range(width)] for c in range(nullity)]
    return [{i: x for i, x in enumerate(v) if x} for v in linalg.rref(vectors, width)]


@dataclass(frozen=True)
class DerivationBasis:
    n: int
    basis: tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)


def _as_matrix(vec: dict[int, Fraction], n: int) -> Matrix:
    flat = _dense(vec, n * n)
    return Matrix(n, n, tuple(flat[r * n:(r + 1) * n] for r in range(n)))


def derivation_space(a: Algebra, backend: str = "auto") -> DerivationBasis:
    """Basis of ``Der(a)``, echelonised as row-major flattened matrices."""
    n = a.dim
    if n and a.table and linalg._use_flint(backend, n ** 3, n * n):
        kernel = _flint_derivation_kernel(a)
    else:
        kernel = sparse_kernel(derivation_system_columns(a), n * n, backend)
    return DerivationBasis(n, tuple(_as_matrix(v, n) for v in kernel))


# nil-independence -------------------------------------------------------------

def _flint():
    from . import linalg

    if linalg.flint is None:
        raise LinalgError("exact spectra need python-flint")
    return linalg.flint


def characteristic_polynomial(m: Matrix) -> list[Fraction]:
    """Coefficients ``[c_0, ..., c_n]`` of ``det(t I - m)``."""
    if not m.is_square:
        raise LinalgError("characteristic polynomial of a non-square matrix")
    flint = _flint()
    fm = flint.fmpq_mat(m.rows, m.cols, [flint.fmpq(x.numerator, x.denominator) for x in m.flatten()])
    return [Fraction(int(c.p), int(c.q)) for c in fm.charpoly().coeffs()]


def rational_roots(coeffs: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Rational roots with multiplicity, plus the leftover cofactor.

    The polynomial splits over Q iff the cofactor has degree 0.
    """
    flint = _flint()
    poly = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in map(rational, coeffs)])
    if poly == 0:
        raise LinalgError("roots of the zero polynomial")
    content, factors = poly.factor()
    roots: list[Fraction] = []
    rest = flint.fmpq_poly([content])
    for fac, mult in factors:
        if fac.degree() == 1:
            c0, c1 = fac.coeffs()
            root = -c0 / c1
            roots += [Fraction(int(root.p), int(root.q))] * mult
        else:
            rest *= fac ** mult
    return sorted(roots), [Fraction(int(c.p), int(c.q)) for c in rest.coeffs()]


def _restrict(m: Matrix, basis: Sequence[Vector]) -> tuple[Matrix, tuple[Vector, ...]]:
    """Matrix of ``m`` on an invariant subspace spanned by ``basis``."""
    # echelon basis: coordinates of an element are its entries at the pivots
    sub = Subspace.span(m.rows, basis)
    piv = sub.pivots()
    k = sub.dim
    cols = [tuple(m.apply(b)[p] for p in piv) for b in sub.basis]
    return (Matrix(k, k, tuple(zip(*cols))) if k else Matrix.zeros(0)), sub.basis


def _joint_spectrum(mats: Sequence[Matrix]) -> list[tuple[Fraction, ...]]:
    """Distinct joint eigenvalue tuples of commuting matrices split over Q."""
    n = mats[0].rows
    pending = [(list(mats), n, ())]
    for depth in range(len(mats)):
        nxt = []
        for restricted, size, tag in pending:
            m = restricted[depth]
            roots, rest = rational_roots(characteristic_polynomial(m))
            if len(rest) > 1:
                raise LinalgError("characteristic polynomial does not split over Q")
            for lam in sorted(set(roots)):
                space = nullspace((m - Matrix.identity(size).scale(lam)) ** size)
                sub = [_restrict(other, space)[0] for other in restricted]
                nxt.append((sub, len(space), tag + (lam,)))
        pending = nxt
    return [tag for _, size, tag in pending if size]


@dataclass(frozen=True)
class NilIndependence:
    """Outcome of a nil-independence test.

    ``status`` is ``"certified_independent"``, ``"dependent"`` (with a nonzero
    ``witness`` whose combination is nilpotent) or ``"no_dependence_found"``.
    """

    status: str
    witness: tuple[Fraction, ...] | None = None


def _combination(ders: Sequence[Matrix], coeffs: Sequence[Fraction]) -> Matrix:
    out = Matrix.zeros(ders[0].rows)
    for d, c in zip(ders, coeffs):
        if c:
            out = out + d.scale(c)
    return out


def nil_independence(ders: Sequence[Matrix], mode: str = "commuting-exact", samples: int = 64,
                     seed: int = 0) -> NilIndependence:
    """Decide whether no nontrivial combination of ``ders`` is nilpotent.

    ``"commuting-exact"`` needs pairwise commuting matrices with characteristic
    polynomials split over Q; a combination is nilpotent iff it kills every
    joint eigenvalue tuple, so the answer is exact.  ``"randomized"`` only
    searches for a nilpotent combination (small coefficient grid first, then
    seeded random rationals) and cannot certify independence.
    """
    ders = list(ders)
    if not ders:
        return NilIndependence("certified_independent")
    n = ders[0].rows
    if any(d.shape != (n, n) for d in ders):
        raise LinalgError("nil-independence needs square matrices of equal size")
    if mode == "commuting-exact":
        for d1, d2 in itertools.combinations(ders, 2):
            if d1 @ d2 != d2 @ d1:
                raise LinalgError("commuting-exact mode got non-commuting matrices")
        spectrum = _joint_spectrum(ders)
        eig = Matrix.from_rows(spectrum, cols=len(ders)) if spectrum else Matrix.zeros(0, len(ders))
        kernel = nullspace(eig)
        if not kernel:
            return NilIndependence("certified_independent")
        return NilIndependence("dependent", kernel[0])
    if mode == "randomized":
        s = len(ders)
        tried = 0
        for coeffs in itertools.product((0, 1, -1), repeat=s):
            if tried >= samples:
                break
            if not any(coeffs):
                continue
            tried += 1
            if is_nilpotent_matrix(_combination(ders, coeffs)):
                return NilIndependence("dependent", tuple(Fraction(c) for c in coeffs))
        rng = random.Random(seed)
        for _ in range(max(0, samples - tried)):
            coeffs = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(s))
            if any(coeffs) and is_nilpotent_matrix(_combination(ders, coeffs)):
                return NilIndependence("dependent", coeffs)
        return NilIndependence("no_dependence_found")
    raise ValueError(f"unknown mode {mode!r}")


# extensions -------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionSpec:
    """Data of ``R = N + Q`` with ``Q`` spanned by ``x_1..x_s`` (appended after N).

    * ``right_action[j]``: matrix of ``n -> [n, x_j]`` on ``N``
    * ``left_action[j][i]``: coordinates in ``N`` of ``[x_j, n_i]``
    * ``qq_products[j][t]``: ``N``-component of ``[x_j, x_t]``
    * ``q_on_q[j][t]``: ``Q``-component of ``[x_j, x_t]`` (usually zero)
    """

    nilradical: Algebra
    right_action: tuple[Matrix, ...]
    left_action: tuple[tuple[Vector, ...], ...] = ()
    qq_products: tuple[tuple[Vector, ...], ...] = ()
    q_on_q: tuple[tuple[Vector, ...], ...] = ()
    q_labels: tuple[str, ...] = ()
    name: str = ""

    @property
    def s(self) -> int:
        return len(self.right_action)


@dataclass(frozen=True)
class Extension:
    algebra: Algebra
    defects: tuple[LeibnizDefect, ...] = field(default=())

    @property
    def is_leibniz(self) -> bool:
        return not self.defects


def _vectors(block, outer: int, inner: int, length: int, what: str) -> list[list[Vector]]:
    if not block:
        return [[(Fraction(0),) * length] * inner for _ in range(outer)]
    if len(block) != outer or any(len(row) != inner for row in block):
        raise ExtensionError(f"{what} must be {outer} x {inner} vectors")
    out = []
    for row in block:
        vecs = []
        for v in row:
            if len(v) != length:
                raise ExtensionError(f"{what} vectors must have length {length}")
            vecs.append(tuple(rational(c) for c in v))
        out.append(vecs)
    return out


def build_extension(spec: ExtensionSpec) -> Extension:
    """Assemble ``R = N + Q`` and attach its Leibniz defect report.

    Every right action must be a derivation of ``N``; that necessary condition
    is enforced, while the remaining compatibility conditions are only reported.
    """
    nil = spec.nilradical
    m, s = nil.dim, spec.s
    for j, d in enumerate(spec.right_action):
        if d.shape != (m, m):
            raise ExtensionError(f"right action {j + 1} has shape {d.shape}, expected {(m, m)}")
        if not is_derivation(nil, d):
            raise ExtensionError(f"right action {j + 1} is not a derivation of the nilradical")
    left = _vectors(spec.left_action, s, m, m, "left_action")
    qq = _vectors(spec.qq_products, s, s, m, "qq_products")
    qoq = _vectors(spec.q_on_q, s, s, s, "q_on_q")
    products: dict[tuple[int, int], dict[int, Fraction]] = {ij: dict(p) for ij, p in nil.table}
    for j, d in enumerate(spec.right_action):
        x = m + j + 1
        for i in range(m):
            products.setdefault((i + 1, x), {}).update(
                {r + 1: d[r, i] for r in range(m) if d[r, i]})
            products.setdefault((x, i + 1), {}).update(
                {r + 1: c for r, c in enumerate(left[j][i]) if c})
        for t in range(s):
            slot = products.setdefault((x, m + t + 1), {})
            slot.update({r + 1: c for r, c in enumerate(qq[j][t]) if c})
            slot.update({m + r + 1: c for r, c in enumerate(qoq[j][t]) if c})
    labels = spec.q_labels or (("x",) if s == 1 else tuple(f"x{j}" for j in range(1, s + 1)))
    if len(labels) != s:
        raise ExtensionError(f"{len(labels)} labels for a {s}-dimensional complement")
    alg = Algebra.from_products(m + s, products, nil.labels + tuple(labels), spec.name)
    return Extension(alg, tuple(verify_leibniz(alg)))


def extension_data(a: Algebra, m: int, name: str | None = None) -> ExtensionSpec:
    """Read ``(N, Q)`` data off an algebra whose first ``m`` basis vectors span ``N``.

    Inverse of :func:`build_extension` when ``N`` is an ideal.
    """
    n = a.dim
    s = n - m
    nil_products = {}
    for (i, j), prod in a.table:
        if i <= m and j <= m:
            if any(k > m for k, _ in prod):
                raise ExtensionError("first m basis vectors do not span a subalgebra")
            nil_products[(i, j)] = dict(prod)
    nil = Algebra.from_products(m, nil_products, a.labels[:m])
    right, left, qq, qoq = [], [], [], []
    for j in range(s):
        x = m + j + 1
        rm = right_mult(a, [1 if c == x - 1 else 0 for c in range(n)])
        lm = left_mult(a, [1 if c == x - 1 else 0 for c in range(n)])
        if any(rm[r, c] for r in range(m, n) for c in range(m)) or any(
                lm[r, c] for r in range(m, n) for c in range(m)):
            raise ExtensionError("first m basis vectors do not span an ideal")
        right.append(Matrix(m, m, tuple(rm.row(r)[:m] for r in range(m))))
        left.append(tuple(tuple(lm[r, c] for r in range(m)) for c in range(m)))
        qq.append(tuple(tuple(a.product(x, m + t + 1)[:m]) for t in range(s)))
        qoq.append(tuple(tuple(a.product(x, m + t + 1)[m:]) for t in range(s)))
    return ExtensionSpec(nil, tuple(right), tuple(left), tuple(qq), tuple(qoq),
                         a.labels[m:], a.name if name is None else name)
