"""Command-line interface.

Exit codes: 0 isomorphic/ok, 1 not isomorphic, 2 input error,
3 not solvable.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .corpus import make_family, run_bench
from .errors import BadParams, NotSolvable, SolvisoError, TableValidationError
from .group_core import Subgroup, load_cayley, save_cayley
from .iso_engine import canon_group, generator_enumeration_iso, solvable_iso
from .series import enumerate_composition_series
from .sylow import sylow_basis


def _load(path):
    try:
        return load_cayley(path)
    except (OSError, ValueError, TableValidationError) as exc:
        print(f"input error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _cmd_validate(args) -> int:
    G = _load(args.file)
    print(f"ok: group of order {G.n}, identity at 1-based index {G.identity + 1}")
    return 0


def _cmd_iso(args) -> int:
    A = _load(args.file_a)
    B = _load(args.file_b)
    try:
        if args.algo == "genenum":
            witness = generator_enumeration_iso(A, B)
        else:
            witness = solvable_iso(A, B, alpha=args.alpha)
    except NotSolvable as exc:
        print(f"not solvable: {exc}", file=sys.stderr)
        return 3
    if witness is None:
        print("not isomorphic")
        return 1
    print("isomorphic")
    if args.witness:
        print(" ".join(str(int(v) + 1) for v in witness))
    return 0


def _cmd_canon(args) -> int:
    G = _load(args.file)
    try:
        form = canon_group(G)
    except NotSolvable as exc:
        print(f"not solvable: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(form.text())
    return 0


def _cmd_series(args) -> int:
    G = _load(args.file)
    whole = Subgroup(G, G.all_elements_mask())
    series = enumerate_composition_series(whole)
    print(len(series))
    for s in series:
        chunks = []
        for sub in s.chain:
            chunks.append(" ".join(str(x + 1) for x in sub.elements()))
        print(" | ".join(chunks))
    return 0


def _cmd_sylow(args) -> int:
    G = _load(args.file)
    try:
        basis = sylow_basis(G)
    except NotSolvable as exc:
        print(f"not solvable: {exc}", file=sys.stderr)
        return 3
    for p, sub in basis.entries:
        print(f"p={p}: " + " ".join(str(x + 1) for x in sub.elements()))
    return 0


def _cmd_bench(args) -> int:
    try:
        rows = run_bench(args.max_order, args.out)
    except BadParams as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(rows) - 1} rows to {args.out}")
    return 0


def _cmd_gen(args) -> int:
    family = args.family
    params: List = list(args.params)
    try:
        if family == "directprod":
            if len(params) != 2:
                raise BadParams("directprod needs two .cayley files")
            params = [_load(p) for p in params]
        G = make_family(family, params)
    except BadParams as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    save_cayley(G, args.out)
    print(f"wrote order-{G.n} table to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solviso",
        description="Isomorphism testing and canonical forms of solvable groups "
        "given as Cayley tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .cayley file is a group table")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("iso", help="decide isomorphism of two groups")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--alpha", type=int, default=None, help="override the split threshold")
    p.add_argument("--algo", choices=("hybrid", "genenum"), default="hybrid")
    p.add_argument("--witness", action="store_true", help="print a 1-based permutation")
    p.set_defaults(func=_cmd_iso)

    p = sub.add_parser("canon", help="print the canonical multiplication table")
    p.add_argument("file")
    p.set_defaults(func=_cmd_canon)

    p = sub.add_parser("series", help="list all composition series")
    p.add_argument("file")
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("sylow", help="print a Sylow basis")
    p.add_argument("file")
    p.set_defaults(func=_cmd_sylow)

    p = sub.add_parser("bench", help="compare hybrid vs generator enumeration")
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gen", help="write a family group to a .cayley file")
    p.add_argument("family", choices=(
        "cyclic", "elemabelian", "dihedral", "quaternion8",
        "heisenberg", "semidirect", "directprod",
    ))
    p.add_argument("params", nargs="*")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except NotSolvable as exc:
        print(f"not solvable: {exc}", file=sys.stderr)
        return 3
    except SolvisoError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
