"""Constructors for the classified algebra families.

Basis orders (1-based, frozen because files and fingerprints depend on them):

* ``A(k)``: ``f1..fk``
* ``l2``: ``e, x`` with ``[e,x]=e``; ``r2``: ``e, x`` with ``[e,x]=e, [x,e]=-e``
* ``Lt(k,t)``: ``e1..et, x1..xt, y1..y(k-t), f1..f(k-t)``
* ``R1(k)``, ``R2(k)``: ``f1..fk, x``
* ``RAkk(k; alpha)``: ``f1..fk, x1..xk``
* ``mu1``, ``mu2``, ``mu3`` ``(n,k)``: ``e1..e(n-2k), f1..f(2k)``
* ``mu3_original(n,k)``: ``e1..e(n-2k-1), f1..f(2k+1)``
* ``Rmu1``, ``Rmu2``, ``Rmu3``: the nilradical basis followed by ``x``

Solvable tables have the Jordan eigenvalue normalised to 1, so it has no
parameter slot.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import Algebra
from .linalg import Matrix, inverse, rational

FAMILIES = (
    "A", "l2", "r2", "Lt", "R1", "R2", "RAkk",
    "mu1", "mu2", "mu3", "mu3_original",
    "Rmu1", "Rmu2", "Rmu3",
)
NILPOTENT_FAMILIES = ("mu1", "mu2", "mu3", "mu3_original")
SUBFAMILIES = ("I1", "I2", "I3", "I4")


class CatalogError(ValueError):
    """Invalid family name, shape or parameters.

    ``violations`` names the broken relations when parameter validation fails.
    """

    def __init__(self, message: str, violations: Sequence[str] = ()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True)
class CatalogSpec:
    family: str
    n: int | None = None
    k: int | None = None
    t: int | None = None
    params: tuple[tuple[str, Fraction], ...] = ()
    subfamily: str | None = None

    @classmethod
    def of(cls, family: str, n=None, k=None, t=None, params: Mapping | None = None,
           subfamily: str | None = None) -> "CatalogSpec":
        ps = tuple(sorted((str(name), rational(v)) for name, v in (params or {}).items()))
        return cls(family, n, k, t, ps, subfamily)

    @property
    def param_dict(self) -> dict[str, Fraction]:
        return dict(self.params)

    def label(self) -> str:
        bits = [f"{name}={getattr(self, name)}" for name in ("n", "k", "t") if getattr(self, name) is not None]
        if self.subfamily:
            bits.append(self.subfamily)
        bits += [f"{name}={v}" for name, v in self.params]
        return f"{self.family}({', '.join(bits)})"


def _labels(prefix: str, count: int, start: int = 1) -> list[str]:
    return [f"{prefix}{i}" for i in range(start, start + count)]


class _Table:
    """Accumulates products given with named 1-based basis elements."""

    def __init__(self, labels: Sequence[str]):
        self.labels = list(labels)
        self.index = {name: i + 1 for i, name in enumerate(labels)}
        if len(self.index) != len(labels):
            raise ValueError("duplicate basis labels")
        self.products: dict[tuple[int, int], dict[int, Fraction]] = {}

    def set(self, left: str, right: str, **terms):
        self.add(left, right, terms)

    def add(self, left: str, right: str, terms: Mapping[str, object]):
        key = (self.index[left], self.index[right])
        slot = self.products.setdefault(key, {})
        for name, c in terms.items():
            if name not in self.index:
                # e.g. f(k+2) when k = 1: the term does not exist in this dimension
                continue
            k = self.index[name]
            slot[k] = slot.get(k, Fraction(0)) + rational(c)

    def build(self, name: str) -> Algebra:
        return Algebra.from_products(len(self.labels), self.products, self.labels, name)


def _check(cond: bool, message: str):
    if not cond:
        raise CatalogError(message)


def _mu_shape(n, k, odd: bool, strict: bool = True):
    _check(isinstance(n, int) and isinstance(k, int), "n and k must be integers")
    _check(k >= 1, f"k must be at least 1, got {k}")
    p = 2 * k + 1 if odd else 2 * k
    # the classification only covers n - p >= 4; smaller tables are still Leibniz
    low = 4 if strict else 2
    _check(n - p >= low, f"n - p >= {low} required (n={n}, p={p})")
    return p


# nilpotent families ---------------------------------------------------------

def abelian(k: int) -> Algebra:
    _check(k >= 0, "k must be non-negative")
    return Algebra.zero(k, _labels("f", k), f"A({k})")


def l2() -> Algebra:
    t = _Table(["e", "x"])
    t.set("e", "x", e=1)
    return t.build("l2")


def r2() -> Algebra:
    t = _Table(["e", "x"])
    t.set("e", "x", e=1)
    t.set("x", "e", e=-1)
    return t.build("r2")


def mu1(n: int, k: int, strict: bool = True) -> Algebra:
    _mu_shape(n, k, odd=False, strict=strict)
    m = n - 2 * k
    t = _Table(_labels("e", m) + _labels("f", 2 * k))
    for i in range(1, m):
        t.add(f"e{i}", "e1", {f"e{i + 1}": 1})
    for j in range(1, k + 1):
        t.add("e1", f"f{j}", {f"f{k + j}": 1})
    return t.build(f"mu1({n},{k})")


def mu2(n: int, k: int, strict: bool = True) -> Algebra:
    _mu_shape(n, k, odd=False, strict=strict)
    m = n - 2 * k
    t = _Table(_labels("e", m) + _labels("f", 2 * k))
    for i in range(1, m):
        t.add(f"e{i}", "e1", {f"e{i + 1}": 1})
    t.add("e1", "f1", {"e2": 1, f"f{k + 1}": 1})
    for i in range(2, m):
        t.add(f"e{i}", "f1", {f"e{i + 1}": 1})
    for j in range(2, k + 1):
        t.add("e1", f"f{j}", {f"f{k + j}": 1})
    return t.build(f"mu2({n},{k})")


def mu3_original(n: int, k: int, strict: bool = True) -> Algebra:
    """The odd-p algebra in its originally published basis."""
    _mu_shape(n, k, odd=True, strict=strict)
    m = n - 2 * k - 1
    t = _Table(_labels("e", m) + _labels("f", 2 * k + 1))
    for i in range(1, m):
        t.add(f"e{i}", "e1", {f"e{i + 1}": 1})
        t.add(f"e{i}", f"f{k + 1}", {f"e{i + 1}": 1})
    for j in range(1, k + 1):
        t.add("e1", f"f{j}", {f"f{k + 1 + j}": 1})
    return t.build(f"mu3_original({n},{k})")


def mu3(n: int, k: int, strict: bool = True) -> Algebra:
    """The odd-p algebra in the working basis where ``[e1,e1]=e3``."""
    _mu_shape(n, k, odd=True, strict=strict)
    m = n - 2 * k
    t = _Table(_labels("e", m) + _labels("f", 2 * k))
    t.add("e1", "e1", {"e3": 1})
    for i in range(2, m):
        t.add(f"e{i}", "e1", {f"e{i + 1}": 1})
    for j in range(1, k + 1):
        t.add("e1", f"f{j}", {f"f{k + j}": 1})
        t.add("e2", f"f{j}", {f"f{k + j}": 1})
    return t.build(f"mu3({n},{k})")


def mu3_new_basis(n: int, k: int) -> Matrix:
    """Columns: the working-basis vectors of ``mu3`` in ``mu3_original`` coordinates.

    ``e1' = e1``, ``e2' = e1 - f(k+1)``, ``e(i+1)' = ei`` for ``2 <= i <= n-2k-1``,
    ``fj' = fj`` and ``f(k+j)' = f(k+1+j)`` for ``1 <= j <= k``.
    """
    _mu_shape(n, k, odd=True)
    m = n - 2 * k - 1
    old = {name: i for i, name in enumerate(_labels("e", m) + _labels("f", 2 * k + 1))}
    cols: list[dict[str, int]] = [{"e1": 1}, {"e1": 1, f"f{k + 1}": -1}]
    cols += [{f"e{i}": 1} for i in range(2, m + 1)]
    cols += [{f"f{j}": 1} for j in range(1, k + 1)]
    cols += [{f"f{k + 1 + j}": 1} for j in range(1, k + 1)]
    rows = [[0] * n for _ in range(n)]
    for c, col in enumerate(cols):
        for name, v in col.items():
            rows[old[name]][c] = v
    return Matrix.from_rows(rows)


def mu3_basis_change(n: int, k: int) -> Matrix:
    """Coordinate map ``g`` with ``change_basis(mu3_original, g) == mu3``."""
    return inverse(mu3_new_basis(n, k))


# abelian nilradical -----------------------------------------------------------

def lt(k: int, t: int) -> Algebra:
    _check(k >= 1 and 0 <= t <= k, f"need k >= 1 and 0 <= t <= k (k={k}, t={t})")
    s = k - t
    tab = _Table(_labels("e", t) + _labels("x", t) + _labels("y", s) + _labels("f", s))
    for i in range(1, t + 1):
        tab.add(f"e{i}", f"x{i}", {f"e{i}": 1})
    for j in range(1, s + 1):
        tab.add(f"f{j}", f"y{j}", {f"f{j}": 1})
        tab.add(f"y{j}", f"f{j}", {f"f{j}": -1})
    return tab.build(f"L_{t}(k={k})")


def _jordan_right(tab: _Table, names: Sequence[str], x: str, eigen=1, sign=1, left=False):
    """``[v_i, x] = sign*(eigen*v_i + v_(i+1))`` (or ``[x, v_i]`` when ``left``)."""
    for idx, v in enumerate(names):
        terms = {v: sign * rational(eigen)}
        if idx + 1 < len(names):
            terms[names[idx + 1]] = terms.get(names[idx + 1], 0) + sign
        if left:
            tab.add(x, v, terms)
        else:
            tab.add(v, x, terms)


def r1(k: int) -> Algebra:
    _check(k >= 1, "k must be at least 1")
    fs = _labels("f", k)
    tab = _Table(fs + ["x"])
    _jordan_right(tab, fs, "x")
    return tab.build(f"R1(k={k})")


def r2_family(k: int) -> Algebra:
    _check(k >= 1, "k must be at least 1")
    fs = _labels("f", k)
    tab = _Table(fs + ["x"])
    _jordan_right(tab, fs, "x")
    _jordan_right(tab, fs, "x", sign=-1, left=True)
    return tab.build(f"R2(k={k})")


def rakk(k: int, alpha: Sequence) -> Algebra:
    _check(k >= 1, "k must be at least 1")
    alpha = [rational(a) for a in alpha]
    _check(len(alpha) == k, f"RAkk needs {k} alpha values, got {len(alpha)}")
    bad = [f"alpha_{i}^2 = -alpha_{i} (alpha_{i} = {a})" for i, a in enumerate(alpha, 1) if a * a != -a]
    if bad:
        raise CatalogError("alpha values must lie in {0, -1}", bad)
    tab = _Table(_labels("f", k) + _labels("x", k))
    for i, a in enumerate(alpha, 1):
        tab.add(f"f{i}", f"x{i}", {f"f{i}": 1})
        if a:
            tab.add(f"x{i}", f"f{i}", {f"f{i}": a})
    name = ",".join(str(a) for a in alpha)
    return tab.build(f"RAkk(k={k}; alpha={name})")


# p-filiform nilradicals, one-dimensional complement ----------------------------

def rmu1(n: int, k: int, a: Sequence) -> Algebra:
    """``R(mu1,1)(a_2, ..., a_(n-2k+1))``."""
    _mu_shape(n, k, odd=False)
    m = n - 2 * k
    a = [rational(v) for v in a]
    _check(len(a) == m, f"Rmu1({n},{k}) takes {m} parameters a_2..a_{m + 1}, got {len(a)}")
    coef = {i + 2: v for i, v in enumerate(a)}  # coef[i] = a_i
    fs = _labels("f", 2 * k)
    tab = _Table(_labels("e", m) + fs + ["x"])
    for i in range(1, m):
        tab.add(f"e{i}", "e1", {f"e{i + 1}": 1})
    for j in range(1, k + 1):
        tab.add("e1", f"f{j}", {f"f{k + j}": 1})
    for i in range(1, m + 1):
        tab.add(f"e{i}", "x", {f"e{j}": coef[j - i + 1] for j in range(i + 1, m + 1)})
    _jordan_right(tab, fs[:k], "x")
    _jordan_right(tab, fs[k:], "x")
    _jordan_right(tab, fs[:k], "x", sign=-1, left=True)
    tab.add("x", "x", {f"e{m}": coef[m + 1]})
    return tab.build(f"Rmu1({n},{k})")


def rmu2(n: int, k: int, alpha, beta, gamma) -> Algebra:
    """``R(mu2,1)(alpha, beta, gamma)``.

    The row ``[f(2k), x] = f(2k)`` only exists for ``k >= 2``: for ``k = 1`` it
    would collide with ``[f(k+1), x] = f(k+2) = 0``.
    """
    _mu_shape(n, k, odd=False)
    m = n - 2 * k
    alpha, beta, gamma = rational(alpha), rational(beta), rational(gamma)
    fs = _labels("f", 2 * k)
    tab = _Table(_labels("e", m) + fs + ["x"])
    nil = mu2(n, k)
    for (i, j), prod in nil.table:
        tab.add(tab.labels[i - 1], tab.labels[j - 1], {tab.labels[kk - 1]: c for kk, c in prod})
    tab.add("e1", "x", {"f1": 1, f"f{k + 1}": alpha})
    tab.add("e2", "x", {"e2": 1, f"f{k + 1}": 1})
    for i in range(3, m + 1):
        tab.add(f"e{i}", "x", {f"e{i}": i - 1})
    _jordan_right(tab, fs[:k], "x")
    _jordan_right(tab, fs[:k], "x", sign=-1, left=True)
    if k >= 2:
        tab.add(f"f{k + 1}", "x", {f"f{k + 2}": 1})
        _jordan_right(tab, fs[k + 1:], "x")
    tab.add("x", "e1", {"f1": -1, **{f"f{k + i}": beta * (-1) ** (i - 1) for i in range(1, k + 1)}})
    tab.add("x", "x", {f"f{k + 1}": gamma})
    return tab.build(f"Rmu2({n},{k})")


def rmu3_param_names(n: int, k: int) -> list[str]:
    """Names of the parameter set ``I`` for ``R(mu3,1)(I)``, in canonical order."""
    m = n - 2 * k
    names = ["a1", "a2"] + [f"a{i}" for i in range(4, m + 1)]
    names += ["b1", "b2", "beta", "gamma", "delta1", "delta2", "delta3"]
    names += [f"theta{n - k + j}" for j in range(1, k + 1)]
    return names


def validate_I(n: int, k: int, params: Mapping) -> list[str]:
    """Relations of the ``R(mu3,1)`` parameter set that ``params`` violates.

    Missing parameters count as zero.  Returns an empty list iff every relation
    holds exactly.
    """
    m = n - 2 * k
    p = {name: Fraction(0) for name in rmu3_param_names(n, k)}
    p.update({name: rational(v) for name, v in params.items()})
    a1, a2, gamma = p["a1"], p["a2"], p["gamma"]
    theta_n = p[f"theta{n}"]
    out = []
    if (a1 + a2) * gamma != 0:
        out.append("(a_1+a_2)gamma=0")
    if (m - 2) * a1 * gamma != 0:
        out.append("(n-2k-2)a_1gamma=0")
    if p["delta1"] != -a1 * p[f"a{m}"]:
        out.append("delta_1=-a_1a_{n-2k}")
    if a1 * p["b2"] != (-1) ** (k - 1) * (a2 + 1) ** k * theta_n:
        out.append("a_1b_2=(-1)^{k-1}(a_2+1)^k theta_n")
    for i in range(1, k):
        if p[f"theta{n - i}"] != (-1) ** i * (a2 + 1) ** i * theta_n:
            out.append(f"theta_{{n-{i}}}=(-1)^{i}(a_2+1)^{i}theta_n")
    return out


def rmu3(n: int, k: int, params: Mapping) -> Algebra:
    """``R(mu3,1)(I)``; ``params`` must satisfy :func:`validate_I`."""
    _mu_shape(n, k, odd=True)
    m = n - 2 * k
    names = rmu3_param_names(n, k)
    unknown = sorted(set(params) - set(names))
    _check(not unknown, f"unknown Rmu3({n},{k}) parameters: {', '.join(unknown)}")
    bad = validate_I(n, k, params)
    if bad:
        raise CatalogError(f"Rmu3({n},{k}) parameters violate: {'; '.join(bad)}", bad)
    p = {name: Fraction(0) for name in names}
    p.update({name: rational(v) for name, v in params.items()})
    a = lambda i: p[f"a{i}"]  # noqa: E731
    a1, a2 = p["a1"], p["a2"]
    fs = _labels("f", 2 * k)
    tab = _Table(_labels("e", m) + fs + ["x"])
    for i in range(2, m):
        tab.add(f"e{i}", "e1", {f"e{i + 1}": 1})
    for j in range(1, k + 1):
        tab.add("e2", f"f{j}", {f"f{k + j}": 1})
    tab.add("e1", "x", {"e1": a1, f"e{m}": a(m), "f1": p["b1"], f"f{k + 1}": p["b2"]})
    e2 = {"e2": a1 + a2, **{f"e{i}": a(i) for i in range(4, m)}}
    e2[f"e{m}"] = e2.get(f"e{m}", 0) + p["beta"]
    tab.add("e2", "x", e2)
    tab.add("e3", "x", {"e3": 2 * a1 + a2, **{f"e{i}": a(i - 1) for i in range(5, m + 1)},
                        f"f{k + 1}": p["b1"]})
    for i in range(4, m + 1):
        tab.add(f"e{i}", "x", {f"e{i}": (i - 1) * a1 + a2,
                               **{f"e{j}": a(j - i + 2) for j in range(i + 2, m + 1)}})
    _jordan_right(tab, fs[:k], "x")
    _jordan_right(tab, fs[:k], "x", sign=-1, left=True)
    _jordan_right(tab, fs[k:], "x", eigen=a1 + a2 + 1)
    tab.add("x", "e1", {"e1": -a1, "f1": -p["b1"],
                        **{f"f{k + i}": p[f"theta{n - k + i}"] for i in range(1, k + 1)}})
    tab.add("x", "e2", {f"e{m}": p["gamma"]})
    tab.add("x", "x", {f"e{m - 1}": p["delta1"], f"e{m}": p["delta2"], f"f{k + 1}": p["delta3"]})
    return tab.build(f"Rmu3({n},{k})")


def _tails(n, k):
    return {f"a{i}" for i in range(4, n - 2 * k + 1)}


# parameters each normalised subfamily leaves free (the rest are fixed or derived)
_SUBFAMILY_FREE = {
    "I1": lambda n, k: _tails(n, k) | {"beta", "gamma", "delta2"},
    "I2": lambda n, k: _tails(n, k) | {"b2", "beta", "delta3", f"theta{n}"},
    "I3": lambda n, k: _tails(n, k) | {"a2", "beta"},
    "I4": lambda n, k: {"a1", "a2", f"a{n - 2 * k}", "b1", "delta2", "delta3", f"theta{n}"},
}


def rmu3_subfamily_params(n: int, k: int, tag: str, free: Mapping) -> dict[str, Fraction]:
    """Full parameter set ``I`` for a normalised subfamily ``I1..I4``.

    ``free`` holds only the parameters the subfamily leaves free; everything
    else is set to its normalised value (derived ones via the subfamily's
    relations).
    """
    _mu_shape(n, k, odd=True)
    m = n - 2 * k
    free = {name: rational(v) for name, v in free.items()}
    allowed = {t: _SUBFAMILY_FREE[t](n, k) for t in SUBFAMILIES}
    if tag not in allowed:
        raise CatalogError(f"unknown subfamily {tag!r}; expected one of {', '.join(SUBFAMILIES)}")
    extra = sorted(set(free) - allowed[tag])
    if extra:
        raise CatalogError(f"parameters not free in {tag}: {', '.join(extra)}")
    p = dict(free)
    if tag == "I2":
        if "a2" in free:
            raise CatalogError("I2 fixes a_2 = -1")
        p["a2"] = Fraction(-1)
    if tag == "I3":
        a2 = p.get("a2", Fraction(0))
        if a2 in (0, -1):
            raise CatalogError("I3 requires a_2 not in {-1, 0}", ["a_2 not in {-1,0}"])
    if tag == "I4":
        a1 = p.get("a1", Fraction(0))
        if a1 == 0:
            raise CatalogError("I4 requires a_1 != 0", ["a_1 != 0"])
        a2 = p.get("a2", Fraction(0))
        theta_n = p.get(f"theta{n}", Fraction(0))
        p["delta1"] = -a1 * p.get(f"a{m}", Fraction(0))
        p["b2"] = (-1) ** (k - 1) * (a2 + 1) ** k * theta_n / a1
        for i in range(1, k):
            p[f"theta{n - k + i}"] = (-1) ** (k - i) * (a2 + 1) ** (k - i) * theta_n
    bad = validate_I(n, k, p)
    if bad:
        raise CatalogError(f"{tag} parameters violate: {'; '.join(bad)}", bad)
    return {name: v for name, v in p.items() if v}


def rmu3_read_params(a: Algebra, n: int, k: int) -> dict[str, Fraction] | None:
    """Recover ``I`` from a table in the ``R(mu3,1)`` shape, or None.

    The reading is certified: the parameters must pass :func:`validate_I` and
    rebuild exactly the given table.
    """
    m = n - 2 * k
    if a.dim != n + 1:
        return None
    e = lambda i: i  # noqa: E731
    f = lambda j: m + j  # noqa: E731
    x = n + 1
    c = lambda i, j, out: a.product(i, j)[out - 1]  # noqa: E731
    p = {
        "a1": c(e(1), x, e(1)),
        "b1": c(e(1), x, f(1)),
        "b2": c(e(1), x, f(k + 1)),
        "beta": c(e(2), x, e(m)),
        "gamma": c(x, e(2), e(m)),
        "delta1": c(x, x, e(m - 1)),
        "delta2": c(x, x, e(m)),
        "delta3": c(x, x, f(k + 1)),
        f"a{m}": c(e(1), x, e(m)),
    }
    p["a2"] = c(e(2), x, e(2)) - p["a1"]
    for i in range(4, m):
        p[f"a{i}"] = c(e(2), x, e(i))
    for i in range(1, k + 1):
        p[f"theta{n - k + i}"] = c(x, e(1), f(k + i))
    p = {name: v for name, v in p.items() if v}
    try:
        rebuilt = rmu3(n, k, p)
    except CatalogError:
        return None
    return p if rebuilt == a else None


def rmu3_subfamily_of(n: int, k: int, params: Mapping) -> str | None:
    """The tag ``I1..I4`` whose normalised pattern ``params`` matches, if any."""
    params = {name: rational(v) for name, v in params.items() if v}
    for tag in SUBFAMILIES:
        try:
            full = rmu3_subfamily_params(n, k, tag, {name: v for name, v in params.items()
                                                      if name in _SUBFAMILY_FREE[tag](n, k)})
        except CatalogError:
            continue
        if full == params:
            return tag
    return None


def rmu3_normalize(n: int, k: int, params: Mapping) -> tuple[str, Matrix, dict[str, Fraction]]:
    """Bring a valid ``R(mu3,1)(I)`` to one of the normalised subfamilies.

    Applies the case-by-case substitutions (each a new basis written in the old
    one) and returns the resulting subfamily tag, the composite matrix whose
    columns are the final basis vectors in the original coordinates, and the
    normalised parameters.  Raises :class:`CatalogError` if some step leaves
    the table outside the ``R(mu3,1)`` shape or outside every subfamily.
    """
    from .algebra import rebase

    m = n - 2 * k
    dim = n + 1
    e = lambda i: i - 1  # noqa: E731
    f = lambda j: m + j - 1  # noqa: E731
    x = n
    alg = rmu3(n, k, params)
    p = rmu3_read_params(alg, n, k)
    total = Matrix.identity(dim)

    def step(generators: dict[int, dict[int, Fraction]]):
        """Substitute generators; ``e_(i+1)' = [e_i', e_1']`` and
        ``f_(k+i)' = [e_2', f_i']`` complete the new basis."""
        nonlocal alg, p, total
        from .algebra import bracket

        cols: list[tuple[Fraction, ...]] = [tuple(Fraction(int(r == c)) for r in range(dim)) for c in range(dim)]
        for c, vec in generators.items():
            col = [Fraction(0)] * dim
            for r, v in vec.items():
                col[r] += rational(v)
            cols[c] = tuple(col)
        for i in range(2, m):
            cols[e(i + 1)] = bracket(alg, cols[e(i)], cols[e(1)])
        for j in range(1, k + 1):
            cols[f(k + j)] = bracket(alg, cols[e(2)], cols[f(j)])
        pm = Matrix.from_columns(cols)
        alg = rebase(alg, pm)
        total = total @ pm
        p = rmu3_read_params(alg, n, k)
        if p is None:
            raise CatalogError("normalising substitution left the R(mu3,1) shape")

    g = lambda name: p.get(name, Fraction(0))  # noqa: E731
    if g("a1") == 0:
        b1 = g("b1")
        if b1:
            step({e(1): {e(1): 1, **{f(i): (-1) ** i * b1 for i in range(1, k + 1)}}})
        a2 = g("a2")
        if a2 == 0:
            b2, d3 = g("b2"), g("delta3")
            step({e(1): {e(1): 1, **{f(k + i): (-1) ** i * b2 for i in range(1, k + 1)}},
                  x: {x: 1, **{f(k + i): (-1) ** i * d3 for i in range(1, k + 1)}}})
        else:
            d2 = g("delta2")
            if d2:
                step({x: {x: 1, e(m): -d2 / a2}})
            if a2 != -1:
                b2, d3 = g("b2"), g("delta3")
                step({e(1): {e(1): 1, **{f(k + i): (-1) ** i * b2 / (a2 + 1) ** i for i in range(1, k + 1)}},
                      x: {x: 1, **{f(k + i): (-1) ** i * d3 / (a2 + 1) ** i for i in range(1, k + 1)}}})
    else:
        a1 = g("a1")
        coef = {i: g(f"a{i}") for i in range(4, m)}
        coef[3] = Fraction(0)
        big = {3: Fraction(0)}
        for i in range(4, m):
            big[i] = -(sum((big[j] * coef[i + 2 - j] for j in range(3, i)), Fraction(0)) + coef[i]) / ((i - 2) * a1)
        big[m] = -(sum((big[j] * coef[m + 2 - j] for j in range(3, m)), Fraction(0)) + g("beta")) / ((m - 2) * a1)
        step({e(2): {e(2): 1, **{e(j): big[j] for j in range(3, m + 1)}}})
    tag = rmu3_subfamily_of(n, k, p)
    if tag is None:
        raise CatalogError(f"normalised parameters match no subfamily: {p}")
    return tag, total, p


# dispatch ---------------------------------------------------------------------

def make(spec: CatalogSpec) -> Algebra:
    """Build the algebra named by ``spec``."""
    f, n, k, t = spec.family, spec.n, spec.k, spec.t
    p = spec.param_dict
    if f == "A":
        return abelian(k)
    if f == "l2":
        return l2()
    if f == "r2":
        return r2()
    if f == "Lt":
        return lt(k, t)
    if f == "R1":
        return r1(k)
    if f == "R2":
        return r2_family(k)
    if f == "RAkk":
        return rakk(k, [p.get(f"alpha{i}", 0) for i in range(1, k + 1)])
    if f == "mu1":
        return mu1(n, k)
    if f == "mu2":
        return mu2(n, k)
    if f == "mu3":
        return mu3(n, k)
    if f == "mu3_original":
        return mu3_original(n, k)
    if f == "Rmu1":
        _mu_shape(n, k, odd=False)
        return rmu1(n, k, [p.get(f"a{i}", 0) for i in range(2, n - 2 * k + 2)])
    if f == "Rmu2":
        return rmu2(n, k, p.get("alpha", 0), p.get("beta", 0), p.get("gamma", 0))
    if f == "Rmu3":
        if spec.subfamily:
            return rmu3(n, k, rmu3_subfamily_params(n, k, spec.subfamily, p))
        return rmu3(n, k, p)
    raise CatalogError(f"unknown family {f!r}")


def nilradical_indices(spec: CatalogSpec) -> list[int]:
    """1-based basis indices spanning the documented nilradical of a solvable family."""
    a = make(spec)
    f = spec.family
    if f in ("R1", "R2"):
        return list(range(1, spec.k + 1))
    if f == "RAkk":
        return list(range(1, spec.k + 1))
    if f in ("Rmu1", "Rmu2", "Rmu3"):
        return list(range(1, a.dim))
    if f in ("l2", "r2"):
        return [1]
    if f == "Lt":
        t, s = spec.t, spec.k - spec.t
        return list(range(1, t + 1)) + list(range(2 * t + s + 1, 2 * t + 2 * s + 1))
    raise CatalogError(f"{f} is not a solvable family with a documented nilradical")


# sampling ---------------------------------------------------------------------

def _sample_rational(rng: random.Random, nonzero: bool = False, avoid: Iterable = ()) -> Fraction:
    avoid = {rational(v) for v in avoid}
    while True:
        v = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if (v or not nonzero) and v not in avoid:
            return v


def sample_rmu3_params(n: int, k: int, rng: random.Random, kind: int) -> dict[str, Fraction]:
    """A random parameter set ``I`` satisfying every relation.

    ``kind`` cycles through the four branches of the relations: ``a_1 != 0``;
    ``a_1 = 0, a_2 = -1``; ``a_1 = 0, a_2`` generic; ``a_1 = a_2 = 0``.  Parameters not pinned by
    the branch are random, so the samples are generally not normalised.
    """
    m = n - 2 * k
    p = {name: _sample_rational(rng) for name in rmu3_param_names(n, k)}
    kind %= 4
    if kind == 0:
        p["a1"] = _sample_rational(rng, nonzero=True)
        p["gamma"] = Fraction(0)
        theta_n = p[f"theta{n}"]
        p["b2"] = (-1) ** (k - 1) * (p["a2"] + 1) ** k * theta_n / p["a1"]
    else:
        p["a1"] = Fraction(0)
        if kind == 1:
            p["a2"] = Fraction(-1)
        elif kind == 2:
            p["a2"] = _sample_rational(rng, avoid=(0, -1))
            p[f"theta{n}"] = Fraction(0)
        else:
            p["a2"] = Fraction(0)
            p[f"theta{n}"] = Fraction(0)
        if p["a2"] != 0:
            p["gamma"] = Fraction(0)
    p["delta1"] = -p["a1"] * p[f"a{m}"]
    for i in range(1, k):
        p[f"theta{n - i}"] = (-1) ** i * (p["a2"] + 1) ** i * p[f"theta{n}"]
    assert not validate_I(n, k, p), validate_I(n, k, p)
    return p


def mu_pairs(family: str, n_max: int, n_min: int = 1) -> list[tuple[int, int]]:
    """All ``(n, k)`` with ``k >= 1`` and ``n - p >= 4`` up to ``n_max``."""
    odd = family in ("mu3", "mu3_original", "Rmu3")
    out = []
    for n in range(n_min, n_max + 1):
        for k in range(1, n):
            p = 2 * k + 1 if odd else 2 * k
            if n - p >= 4:
                out.append((n, k))
    return out


def list_family_instances(family: str, n_max: int = 12, k_max: int = 3, samples: int = 3,
                          seed: int = 0) -> list[CatalogSpec]:
    """Deterministic enumeration of valid specs for test sweeps.

    ``n_max`` bounds the nilradical dimension of the p-filiform families and
    ``k_max`` the rank-like parameter of the others; solvable families with
    free parameters get ``samples`` seeded rational parameter vectors.
    """
    rng = random.Random(f"{family}:{seed}")
    specs: list[CatalogSpec] = []
    if family in ("l2", "r2"):
        return [CatalogSpec.of(family)]
    if family in ("A", "R1", "R2"):
        return [CatalogSpec.of(family, k=k) for k in range(1, k_max + 1)]
    if family == "Lt":
        return [CatalogSpec.of("Lt", k=k, t=t) for k in range(1, k_max + 1) for t in range(k + 1)]
    if family == "RAkk":
        for k in range(1, k_max + 1):
            for bits in range(2 ** k):
                alpha = {f"alpha{i + 1}": -((bits >> i) & 1) for i in range(k)}
                specs.append(CatalogSpec.of("RAkk", k=k, params=alpha))
        return specs
    if family in NILPOTENT_FAMILIES:
        return [CatalogSpec.of(family, n=n, k=k) for n, k in mu_pairs(family, n_max)]
    if family == "Rmu1":
        for n, k in mu_pairs(family, n_max):
            for _ in range(samples):
                ps = {f"a{i}": _sample_rational(rng) for i in range(2, n - 2 * k + 2)}
                specs.append(CatalogSpec.of("Rmu1", n=n, k=k, params=ps))
        return specs
    if family == "Rmu2":
        for n, k in mu_pairs(family, n_max):
            for _ in range(samples):
                ps = {name: _sample_rational(rng) for name in ("alpha", "beta", "gamma")}
                specs.append(CatalogSpec.of("Rmu2", n=n, k=k, params=ps))
        return specs
    if family == "Rmu3":
        for n, k in mu_pairs(family, n_max):
            for s in range(samples):
                specs.append(CatalogSpec.of("Rmu3", n=n, k=k, params=sample_rmu3_params(n, k, rng, s)))
        return specs
    raise CatalogError(f"unknown family {family!r}")
