"""Command-line front end.

Exit codes: 0 success, 1 internal invariant violation, 2 argument errors
(argparse's convention), 3 budget exhaustion with partial output emitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cache import default_cache_dir
from .engine import (
    chow_rank,
    expand_rational,
    hilbert_coeffs,
    parse_rational_function,
    rank_table,
    relation_matrix,
)
from .linalg import rank as matrix_rank
from .relations import normalize
from .strata import (
    InvariantViolation,
    MonomialStratum,
    enumerate_basis,
    parse_locus,
    verify_locus,
)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_range(text: str) -> list[int]:
    """"A..B" inclusive, or a single integer."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _locus(args) -> "LocusPredicate":
    return parse_locus(args.locus)


def _check_exact_only(args, provenances) -> None:
    if not getattr(args, "exact_only", False):
        return
    for provenance in provenances:
        if provenance not in ("exact", "modular-confirmed"):
            raise InvariantViolation(
                f"provenance {provenance!r} forbidden under --exact-only"
            )


def _cmd_rank(args) -> int:
    result = chow_rank(args.n, args.d, _locus(args), cache_dir=args.cache)
    _check_exact_only(args, [result.provenance])
    print(result.dimension)
    return EXIT_OK


def _cmd_table(args) -> int:
    table = rank_table(
        _parse_range(args.n),
        _parse_range(args.d),
        _locus(args),
        jobs=args.jobs,
        max_seconds=args.max_seconds,
        max_generators=args.max_generators,
        cache_dir=args.cache,
    )
    _check_exact_only(args, [r.provenance for r in table.cells.values()])
    if args.format == "tsv":
        sys.stdout.write(table.to_tsv())
    else:
        print(json.dumps(table.to_json_records(), indent=2))
    return EXIT_BUDGET if table.budget_exhausted else EXIT_OK


def _cmd_hilbert(args) -> int:
    table = hilbert_coeffs(
        args.n,
        _locus(args),
        args.dmax,
        cache_dir=args.cache,
        max_seconds=args.max_seconds,
    )
    for d, coeff in enumerate(table.coefficients):
        print(f"{d}\t{coeff}")
    if not table.complete:
        return EXIT_BUDGET
    if args.compare is not None:
        numer, denom = parse_rational_function(args.compare)
        expected = expand_rational(numer, denom, args.dmax)
        matches = [c == e for c, e in zip(table.coefficients, expected)]
        verdict = "match" if all(matches) else "mismatch"
        print(f"compare\t{verdict}")
        if verdict == "mismatch":
            return EXIT_INVARIANT
    return EXIT_OK


def _cmd_basis(args) -> int:
    basis = enumerate_basis(args.n, args.d, _locus(args))
    print(json.dumps([s.to_json_obj() for s in basis], indent=2))
    return EXIT_OK


def _cmd_relations(args) -> int:
    matrix = relation_matrix(args.n, args.d, _locus(args))
    if args.dump is not None:
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write(matrix.to_triplet_text())
        with open(args.dump + ".columns.json", "w", encoding="utf-8") as fh:
            json.dump(list(matrix.column_keys), fh, indent=2)
    summary = {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "nnz": matrix.nnz(),
        "rank": matrix_rank(matrix),
    }
    print(json.dumps(summary))
    return EXIT_OK


def _cmd_normalize(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        stratum = MonomialStratum.from_json_obj(json.load(fh))
    vector = normalize(stratum)
    print(json.dumps(vector.to_json_obj(), indent=2))
    return EXIT_OK


def _cmd_verify_locus(args) -> int:
    closed = verify_locus(_locus(args), args.n, args.max_edges)
    print(
        json.dumps(
            {
                "locus": args.locus,
                "n": args.n,
                "max_edges": args.max_edges,
                "closed": closed,
            }
        )
    )
    return EXIT_OK if closed else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--cache",
        default=default_cache_dir(),
        metavar="DIR",
        help="result cache directory (default: $CHOW_CACHE_DIR)",
    )
    shared.add_argument(
        "--jobs", type=int, default=1, metavar="K", help="parallel workers"
    )
    shared.add_argument(
        "--max-seconds",
        type=float,
        default=None,
        metavar="S",
        help="wall-clock budget; exceeding it skips remaining cells",
    )
    shared.add_argument(
        "--exact-only",
        action="store_true",
        help="fail rather than emit any number without exact provenance",
    )

    parser = argparse.ArgumentParser(
        prog="prestrata",
        description="Dimensions of the strata quotient over exact rationals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", parents=[shared], help="one dimension")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--locus", default="all")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("table", parents=[shared], help="grid of dimensions")
    p.add_argument("--n", required=True, metavar="A..B")
    p.add_argument("--d", required=True, metavar="A..B")
    p.add_argument("--locus", default="all")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument(
        "--max-generators",
        type=int,
        default=None,
        metavar="G",
        help="skip cells whose basis is larger",
    )
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("hilbert", parents=[shared], help="dimensions by degree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--locus", default="all")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument(
        "--compare",
        default=None,
        metavar="NUM/DEN",
        help='rational function, e.g. "(1-t)/(1-2t)"',
    )
    p.set_defaults(func=_cmd_hilbert)

    p = sub.add_parser("basis", parents=[shared], help="list basis strata")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--locus", default="all")
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("relations", parents=[shared], help="relation matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--locus", default="all")
    p.add_argument(
        "--dump",
        default=None,
        metavar="PATH",
        help="write triplet text here plus a PATH.columns.json key table",
    )
    p.set_defaults(func=_cmd_relations)

    p = sub.add_parser(
        "normalize", parents=[shared], help="rewrite a psi monomial into the basis"
    )
    p.add_argument("--input", required=True, metavar="stratum.json")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser(
        "verify-locus", parents=[shared], help="check closure under contraction"
    )
    p.add_argument("--locus", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-edges", type=int, required=True)
    p.set_defaults(func=_cmd_verify_locus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
