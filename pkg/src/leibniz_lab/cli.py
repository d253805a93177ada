"""``leibniz-lab`` command line.

Exit codes: 0 success, 1 mathematical failure (defects, no rigidity
certificate), 2 unreadable or malformed input, 3 failed validation or
precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import catalog
from .algebra import change_basis, rebase, verify_leibniz
from .cohomology import cohomology
from .derivations import ExtensionError, build_extension
from .fileformat import ParseError, dump_algebra, load_algebra, load_extension, load_matrix
from .invariants import fingerprint, nilpotency_status
from .linalg import SingularMatrixError, format_rational, rational

OK, FAILURE, PARSE_ERROR, INVALID = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        return load_algebra(path)
    except OSError as exc:
        raise _Exit(PARSE_ERROR, f"cannot read {path}: {exc.strerror}") from None
    except ParseError as exc:
        raise _Exit(PARSE_ERROR, str(exc)) from None
    except ValueError as exc:
        raise _Exit(PARSE_ERROR, f"{path}: {exc}") from None


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_json(doc):
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


# commands ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    a = _load(args.path)
    defects = verify_leibniz(a)
    if args.json:
        _print_json({"leibniz": not defects,
                     "defects": [{"triple": list(d.triple), "value": _vec(d.value)} for d in defects]})
    elif not defects:
        print(f"{a.name or args.path}: Leibniz identity holds on all {a.dim ** 3} basis triples")
    else:
        print(f"{a.name or args.path}: {len(defects)} defective triples")
        for d in defects:
            terms = " + ".join(f"{format_rational(c)}*{a.labels[k]}" for k, c in enumerate(d.value) if c)
            print(f"  {d.triple}: {terms}")
    return OK if not defects else FAILURE


def cmd_invariants(args) -> int:
    a = _load(args.path)
    fp = fingerprint(a, args.extra, args.seed)
    nil = nilpotency_status(a)
    doc = fp.as_dict()
    doc["nilpotency_index"] = nil.index
    if args.json:
        _print_json(doc)
        return OK
    print(a.name or args.path)
    for key in ("dim", "lcs_dims", "ds_dims", "dim_ann_r", "dim_center", "dim_der",
                "char_seq", "nilpotent", "nilpotency_index", "solvable"):
        value = doc[key]
        if isinstance(value, list):
            value = "(" + ", ".join(map(str, value)) + ")"
        print(f"  {key}: {value}")
    return OK


def _report(args):
    a = _load(args.path)
    defects = verify_leibniz(a)
    if defects:
        raise _Exit(FAILURE, f"{a.name or args.path}: not a Leibniz algebra ({len(defects)} defective triples)")
    return a, cohomology(a)


def _print_report(name: str, rep, as_json: bool):
    if as_json:
        _print_json(rep.as_dict())
    else:
        print(f"{name}: dim ZL2 = {rep.dim_zl2}, dim BL2 = {rep.dim_bl2}, "
              f"dim HL2 = {rep.dim_hl2}, rigidity: {rep.rigidity}")


def cmd_cohomology(args) -> int:
    a, rep = _report(args)
    _print_report(a.name or args.path, rep, args.json)
    return OK


def cmd_rigid(args) -> int:
    a, rep = _report(args)
    _print_report(a.name or args.path, rep, args.json)
    return OK if rep.rigidity == "certified_rigid" else FAILURE


def _catalog_params(extra: Sequence[str]) -> dict[str, object]:
    """``--name value`` pairs; comma lists expand to ``name1, name2, ...``
    (``--a`` expands from ``a2`` to match the ``a_2, a_3, ...`` numbering)."""
    params: dict[str, object] = {}
    it = iter(extra)
    for flag in it:
        if not flag.startswith("--") or len(flag) < 3:
            raise _Exit(PARSE_ERROR, f"unexpected argument {flag!r}")
        name, eq, value = flag[2:].partition("=")
        if not eq:
            value = next(it, None)
            if value is None:
                raise _Exit(PARSE_ERROR, f"missing value for {flag}")
        parts = value.split(",")
        try:
            values = [rational(p.strip()) for p in parts]
        except ValueError as exc:
            raise _Exit(PARSE_ERROR, f"{flag}: {exc}") from None
        if len(values) == 1 and name != "a":
            params[name] = values[0]
        else:
            start = 2 if name == "a" else 1
            for i, v in enumerate(values, start):
                params[f"{name}{i}"] = v
    return params


def cmd_catalog(args, extra: Sequence[str]) -> int:
    params = _catalog_params(extra)
    if args.family not in catalog.FAMILIES:
        raise _Exit(INVALID, f"unknown family {args.family!r}; choose from {', '.join(catalog.FAMILIES)}")
    spec = catalog.CatalogSpec.of(args.family, n=args.n, k=args.k, t=args.t, params=params,
                                  subfamily=args.subfamily)
    try:
        a = catalog.make(spec)
    except catalog.CatalogError as exc:
        lines = [f"invalid {spec.label()}: {exc}"]
        lines += [f"  violated: {v}" for v in exc.violations]
        raise _Exit(INVALID, "\n".join(lines)) from None
    except (TypeError, ValueError) as exc:
        raise _Exit(INVALID, f"invalid {spec.label()}: {exc}") from None
    _emit(dump_algebra(a), args.output)
    return OK


def cmd_change_basis(args) -> int:
    a = _load(args.path)
    try:
        g = load_matrix(args.matrix)
    except OSError as exc:
        raise _Exit(PARSE_ERROR, f"cannot read {args.matrix}: {exc.strerror}") from None
    except ParseError as exc:
        raise _Exit(PARSE_ERROR, str(exc)) from None
    if g.shape != (a.dim, a.dim):
        raise _Exit(INVALID, f"matrix of shape {g.shape} for an algebra of dimension {a.dim}")
    try:
        b = change_basis(a, g) if args.mode == "action" else rebase(a, g)
    except SingularMatrixError:
        raise _Exit(INVALID, "basis change matrix is singular") from None
    _emit(dump_algebra(b), args.output)
    return OK


def _compare_rows(a, b, args):
    fa, fb = fingerprint(a, args.extra, args.seed), fingerprint(b, args.extra, args.seed)
    da, db = fa.as_dict(), fb.as_dict()
    rows = [(key, da[key], db[key]) for key in da]
    if fa == fb and not verify_leibniz(a) and not verify_leibniz(b):
        ca, cb = cohomology(a).as_dict(), cohomology(b).as_dict()
        rows += [(key, ca[key], cb[key]) for key in ("dim_zl2", "dim_bl2", "dim_hl2")]
    return rows


def cmd_compare(args) -> int:
    a, b = _load(args.left), _load(args.right)
    rows = _compare_rows(a, b, args)
    differing = [key for key, x, y in rows if x != y]
    verdict = "distinguished" if differing else "indistinguishable"
    if args.json:
        _print_json({"verdict": verdict, "differing": differing,
                     "invariants": {key: [x, y] for key, x, y in rows}})
    elif differing:
        print(f"distinguished by {', '.join(differing)}")
        for key, x, y in rows:
            if x != y:
                print(f"  {key}: {x} vs {y}")
    else:
        print("indistinguishable (all computed invariants agree; this is not an isomorphism proof)")
    return OK


def cmd_extend(args) -> int:
    nil = _load(args.nilradical)
    try:
        spec = load_extension(args.data, nil)
    except OSError as exc:
        raise _Exit(PARSE_ERROR, f"cannot read {args.data}: {exc.strerror}") from None
    except ParseError as exc:
        raise _Exit(PARSE_ERROR, str(exc)) from None
    try:
        ext = build_extension(spec)
    except ExtensionError as exc:
        raise _Exit(INVALID, str(exc)) from None
    _emit(dump_algebra(ext.algebra), args.output)
    if ext.defects:
        print(f"extension is not Leibniz: {len(ext.defects)} defective triples, "
              f"first at {ext.defects[0].triple}", file=sys.stderr)
        return FAILURE
    print(f"extension is Leibniz (dim {ext.algebra.dim})", file=sys.stderr)
    return OK


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leibniz-lab", allow_abbrev=False,
                                description="Exact computations with finite-dimensional Leibniz algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_json(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    def with_seed(sp):
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized candidate sets")
        sp.add_argument("--extra", type=int, default=8, help="random characteristic-sequence candidates")
        return sp

    sp = with_json(sub.add_parser("verify", help="check the Leibniz identity"))
    sp.add_argument("path")
    sp = with_seed(with_json(sub.add_parser("invariants", help="series, annihilators, fingerprint")))
    sp.add_argument("path")
    for name, help_ in (("cohomology", "dimensions of ZL2, BL2, HL2"),
                        ("rigid", "exit 0 iff HL2 = 0 certifies rigidity")):
        sp = with_json(sub.add_parser(name, help=help_))
        sp.add_argument("path")
    sp = sub.add_parser("catalog", allow_abbrev=False,
                        help="emit a catalog algebra; family parameters as --name value")
    sp.add_argument("family")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--subfamily", choices=catalog.SUBFAMILIES)
    sp.add_argument("-o", "--output")
    sp = sub.add_parser("change-basis", help="transport the table along a basis change")
    sp.add_argument("path")
    sp.add_argument("matrix")
    sp.add_argument("--mode", choices=("action", "new-basis"), default="action",
                    help="action: g maps old coordinates to new ones; "
                         "new-basis: the matrix columns are the new basis vectors")
    sp.add_argument("-o", "--output")
    sp = with_seed(with_json(sub.add_parser("compare", help="compare invariants of two algebras")))
    sp.add_argument("left")
    sp.add_argument("right")
    sp = sub.add_parser("extend", help="build N + Q from extension data")
    sp.add_argument("nilradical")
    sp.add_argument("data")
    sp.add_argument("-o", "--output")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra and args.command != "catalog":
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        if args.command == "catalog":
            return cmd_catalog(args, extra)
        handler = {
            "verify": cmd_verify, "invariants": cmd_invariants, "cohomology": cmd_cohomology,
            "rigid": cmd_rigid, "change-basis": cmd_change_basis, "compare": cmd_compare,
            "extend": cmd_extend,
        }[args.command]
        return handler(args)
    except _Exit as exc:
        print(f"leibniz-lab: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
