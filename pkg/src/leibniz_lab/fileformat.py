"""JSON files for algebras, matrices and extension data.

Rationals are always strings (``"p"`` or ``"p/q"``) so nothing passes through
floating point.  Indices are 1-based.  Emitted text is deterministic: fixed key
order, sorted brackets, two-space indentation and a trailing newline.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra import Algebra
from .derivations import ExtensionSpec
from .linalg import Matrix, format_rational, rational

__all__ = [
    "ParseError",
    "dump_algebra",
    "dump_matrix",
    "load_algebra",
    "load_extension",
    "load_matrix",
    "parse_algebra",
    "parse_extension",
    "parse_matrix",
]


class ParseError(ValueError):
    """Malformed input; the message names the offending location."""


def _json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _rat(x, where: str) -> Fraction:
    if not isinstance(x, (str, int)) or isinstance(x, bool):
        raise ParseError(f"{where}: expected a rational string, got {json.dumps(x)}")
    try:
        return rational(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def _int(x, where: str, lo: int, hi: int) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise ParseError(f"{where}: expected an integer, got {json.dumps(x)}")
    if not lo <= x <= hi:
        raise ParseError(f"{where}: index {x} outside {lo}..{hi}")
    return x


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list")
    return x


# algebras ---------------------------------------------------------------------

def dump_algebra(a: Algebra) -> str:
    brackets = [
        {"left": i, "right": j, "value": [[k, format_rational(c)] for k, c in prod]}
        for (i, j), prod in a.table
    ]
    doc = {"name": a.name, "dim": a.dim, "basis": list(a.labels), "brackets": brackets}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_algebra(text: str, source: str = "<algebra>") -> Algebra:
    doc = _json(text, source)
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    for key in ("dim", "brackets"):
        if key not in doc:
            raise ParseError(f"{source}: missing field {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise ParseError(f"{source}: dim must be a non-negative integer")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"{source}: name must be a string")
    labels = doc.get("basis") or [f"b{i}" for i in range(1, dim + 1)]
    if not isinstance(labels, list) or len(labels) != dim or not all(isinstance(s, str) for s in labels):
        raise ParseError(f"{source}: basis must list {dim} label strings")
    products: dict[tuple[int, int], dict[int, Fraction]] = {}
    for b, entry in enumerate(_list(doc["brackets"], f"{source}: brackets")):
        where = f"{source}: brackets[{b}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        i = _int(entry.get("left"), f"{where}.left", 1, dim)
        j = _int(entry.get("right"), f"{where}.right", 1, dim)
        slot = products.setdefault((i, j), {})
        for v, term in enumerate(_list(entry.get("value"), f"{where}.value")):
            tw = f"{where}.value[{v}]"
            if not isinstance(term, list) or len(term) != 2:
                raise ParseError(f"{tw}: expected [index, rational]")
            k = _int(term[0], f"{tw}[0]", 1, dim)
            if k in slot:
                raise ParseError(f"{tw}: repeated output index {k} for bracket ({i},{j})")
            slot[k] = _rat(term[1], f"{tw}[1]")
    return Algebra.from_products(dim, products, labels, name)


def load_algebra(path: str) -> Algebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read(), path)


# matrices ---------------------------------------------------------------------

def _matrix(rows, where: str, shape: tuple[int, int] | None = None) -> Matrix:
    rows = _list(rows, where)
    width = len(rows[0]) if rows and isinstance(rows[0], list) else 0
    out = []
    for r, row in enumerate(rows):
        row = _list(row, f"{where}[{r}]")
        if len(row) != width:
            raise ParseError(f"{where}[{r}]: expected {width} entries, got {len(row)}")
        out.append(tuple(_rat(x, f"{where}[{r}][{c}]") for c, x in enumerate(row)))
    if shape is not None and (len(out), width) != shape:
        raise ParseError(f"{where}: expected a {shape[0]}x{shape[1]} matrix, got {len(out)}x{width}")
    return Matrix(len(out), width, tuple(out))


def dump_matrix(m: Matrix) -> str:
    return json.dumps([[format_rational(x) for x in row] for row in m.entries]) + "\n"


def parse_matrix(text: str, source: str = "<matrix>") -> Matrix:
    """A JSON list of rows, or an object with a ``"matrix"`` field holding one."""
    doc = _json(text, source)
    if isinstance(doc, dict):
        if "matrix" not in doc:
            raise ParseError(f"{source}: missing field 'matrix'")
        doc = doc["matrix"]
    return _matrix(doc, f"{source}: matrix")


def load_matrix(path: str) -> Matrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read(), path)


# extension data ---------------------------------------------------------------

def _vector_block(doc, key: str, outer: int, inner: int, length: int, source: str):
    if key not in doc:
        return ()
    where = f"{source}: {key}"
    block = _list(doc[key], where)
    if len(block) != outer:
        raise ParseError(f"{where}: expected {outer} entries, got {len(block)}")
    out = []
    for j, row in enumerate(block):
        out.append(tuple(m_row for m_row in _matrix(row, f"{where}[{j}]", (inner, length)).entries))
    return tuple(out)


def parse_extension(text: str, nilradical: Algebra, source: str = "<extension>") -> ExtensionSpec:
    """Extension data for ``nilradical``; see the README for the schema."""
    doc = _json(text, source)
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "right_action" not in doc:
        raise ParseError(f"{source}: missing field 'right_action'")
    m = nilradical.dim
    right = tuple(_matrix(mat, f"{source}: right_action[{j}]", (m, m))
                  for j, mat in enumerate(_list(doc["right_action"], f"{source}: right_action")))
    s = len(right)
    labels = doc.get("complement", [])
    if not isinstance(labels, list) or (labels and len(labels) != s) or not all(isinstance(x, str) for x in labels):
        raise ParseError(f"{source}: complement must list {s} label strings")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"{source}: name must be a string")
    return ExtensionSpec(
        nilradical=nilradical,
        right_action=right,
        left_action=_vector_block(doc, "left_action", s, m, m, source),
        qq_products=_vector_block(doc, "qq_products", s, s, m, source),
        q_on_q=_vector_block(doc, "q_on_q", s, s, s, source),
        q_labels=tuple(labels),
        name=name,
    )


def load_extension(path: str, nilradical: Algebra) -> ExtensionSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_extension(fh.read(), nilradical, path)
