"""Command line interface.

Exit codes: 0 success, 1 internal error, 2 usage, 3 resource guard,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from . import enumerate as gen
from . import equiv, oracle, store
from . import transforms as tr
from .enumerate import ResourceLimitExceeded

log = logging.getLogger("bfcensus")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_GUARD, EXIT_VERIFY = 0, 1, 2, 3, 4
CLASSES = ("monotone", "balanced-monotone", "unate", "balanced-unate")
LABEL = {"monotone": "M", "balanced-monotone": "BM", "unate": "U", "balanced-unate": "BU"}


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, *, need_class: bool = True) -> None:
    if need_class:
        p.add_argument("--class", dest="cls", choices=CLASSES, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--nondegenerate", action="store_true")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bfcensus",
                                     description="Census of monotone and unate Boolean functions.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="generate a function set")
    _add_common(p)
    p.add_argument("--out", help="write the set as .fset")
    p.add_argument("--weights", action="store_true", help="print the per-weight histogram")
    p.add_argument("--signatures", action="store_true", help="store signatures (unate classes)")

    p = sub.add_parser("count", help="count functions")
    _add_common(p)
    p.add_argument("--via", choices=("enumerate", "transform"), default="transform")

    p = sub.add_parser("classes", help="count permutation classes")
    _add_common(p)
    p.add_argument("--method", choices=("filter", "canonical", "both"), default="filter")
    p.add_argument("--out", help="write representatives as .fset plus a JSON sidecar")

    p = sub.add_parser("verify", help="check everything against the oracle and published tables")
    _add_common(p, need_class=False)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--tables", help="JSON file overriding embedded constants (label -> values)")

    p = sub.add_parser("fset", help=".fset utilities")
    fsub = p.add_subparsers(dest="fset_command", required=True)
    q = fsub.add_parser("merge")
    q.add_argument("inputs", nargs="+")
    q.add_argument("--out", required=True)
    q = fsub.add_parser("sort")
    q.add_argument("input")
    q.add_argument("--out", required=True)
    q = fsub.add_parser("info")
    q.add_argument("input")
    q.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _validate(args) -> None:
    if getattr(args, "threads", 1) < 1:
        raise UsageError("--threads must be positive")
    n = getattr(args, "n", None)
    if n is not None and n < 0:
        raise UsageError("--n must be non-negative")
    if args.command == "enumerate" and args.signatures and args.cls not in ("unate", "balanced-unate"):
        raise UsageError("--signatures applies to unate classes only")
    if args.command == "enumerate" and args.signatures and not args.out:
        raise UsageError("--signatures needs --out")
    if args.command == "count" and args.via == "transform":
        top = len(tr.DEDEKIND) - 1 if args.cls in ("monotone", "unate") else len(tr.PUBLISHED["BM"]) - 1
        if n > top:
            raise UsageError(f"transform counts for {args.cls} reach n={top}")
    if args.command == "classes" and args.method not in ("filter", "canonical", "both"):
        raise UsageError("bad --method")
    if args.command == "verify" and not 0 <= args.n_max <= 6:
        raise UsageError("--n-max must be in 0..6")


def _emit(data: dict, fmt: str, text: str, csv_rows: list[tuple] | None = None) -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif fmt == "csv":
        rows = csv_rows or [tuple(data.keys()), tuple(data.values())]
        for r in rows:
            print(",".join(str(v) for v in r))
    else:
        print(text)


def _function_set(args):
    if args.cls in ("unate", "balanced-unate"):
        u = gen.enumerate_unate(args.n, allow_large=args.allow_large, threads=args.threads)
        fs = u.functions if args.cls == "unate" else gen.filter_balanced(u.functions)
        return fs, u
    return gen.enumerate_class(args.cls, args.n, allow_large=args.allow_large, threads=args.threads), None


def cmd_enumerate(args) -> int:
    fs, u = _function_set(args)
    if args.nondegenerate:
        fs = gen.filter_nondegenerate(fs)
    if args.out:
        if args.signatures:
            keep = {int(v) for v in fs.items}
            store.write_signed(args.out, fs.n, (sf for sf in u if sf.fn.table in keep))
        else:
            store.write_set(args.out, fs)
    data = {"class": args.cls, "n": args.n, "nondegenerate": args.nondegenerate,
            "count": str(len(fs))}
    text = str(len(fs))
    rows = None
    if args.weights:
        sizes = gen.bucket_by_weight(fs).sizes()
        data["weights"] = [str(c) for c in sizes]
        data["weights_symmetric"] = sizes == sizes[::-1]
        text += "\n" + "\n".join(f"w={w} {c}" for w, c in enumerate(sizes))
        text += f"\nsymmetric {'yes' if sizes == sizes[::-1] else 'no'}"
        rows = [("weight", "count")] + list(enumerate(sizes))
    _emit(data, args.format, text, rows)
    return EXIT_OK


def _transform_counts(cls: str, n: int, nondegenerate: bool) -> tr.CountSequence:
    if cls in ("monotone", "unate"):
        seqs = tr.monotone_chain()
    else:
        seqs = tr.balanced_chain(tr.KNOWN.sequence("BM"))
    label = ("nd" if nondegenerate else "") + LABEL[cls]
    s = seqs[label]
    return tr.CountSequence(s.label, s.values[:n + 1])


def cmd_count(args) -> int:
    label = ("nd" if args.nondegenerate else "") + LABEL[args.cls]
    if args.via == "transform":
        seq = _transform_counts(args.cls, args.n, args.nondegenerate)
        value = seq[args.n]
    else:
        fs, _ = _function_set(args)
        if args.nondegenerate:
            fs = gen.filter_nondegenerate(fs)
        value = len(fs)
        seq = None
    data = {"label": label, "n": args.n, "via": args.via, "count": str(value)}
    if seq is not None:
        data["values"] = [str(v) for v in seq.values]
    rows = [("n", "value")] + (list(enumerate(seq.values)) if seq else [(args.n, value)])
    _emit(data, args.format, str(value), rows)
    return EXIT_OK


def cmd_classes(args) -> int:
    fs, _ = _function_set(args)
    if args.nondegenerate:
        fs = gen.filter_nondegenerate(fs)
    results = {}
    if args.method in ("filter", "both"):
        results["filter"] = equiv.filter_classes(fs)
    if args.method in ("canonical", "both"):
        results["canonical"] = equiv.class_census_by_canonical(fs, threads=args.threads)
    counts = {k: v.class_count for k, v in results.items()}
    census = next(iter(results.values()))
    prop = ("nd-" if args.nondegenerate else "") + args.cls
    if args.out:
        census.save(args.out, prop)
    data = {"property": prop, "n": args.n, "classCount": str(census.class_count),
            "sourceSize": str(census.source_size)}
    if args.method == "both":
        data["methods"] = {k: str(v) for k, v in counts.items()}
    _emit(data, args.format, str(census.class_count))
    if len(set(counts.values())) > 1:
        print(f"class counts disagree: {counts}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _load_constants(path: str | None) -> tr.KnownConstants:
    if not path:
        return tr.KNOWN
    with open(path) as fh:
        override = json.load(fh)
    k = tr.KNOWN
    tables = dict(k.tables)
    changes = {}
    for label, values in override.items():
        vals = tuple(int(v) for v in values)
        if label == "dedekind":
            changes["dedekind"] = vals
        elif label == "monotone_classes":
            changes["monotone_classes"] = vals
        elif label in tables:
            tables[label] = vals
        else:
            raise UsageError(f"unknown table {label!r} in {path}")
    return replace(k, tables=tables, **changes)


def cmd_verify(args) -> int:
    constants = _load_constants(args.tables)
    report = oracle.verify_all(min(args.n_max, oracle.ORACLE_MAX_N), constants)
    report.extend(oracle.verify_tables(args.n_max, constants, threads=args.threads))
    if args.format == "json":
        print(report.to_json())
    elif args.format == "csv":
        print("status,group,name,n,expected,actual")
        for c in report.checks:
            print(",".join(str(v) for v in ("PASS" if c.ok else "FAIL", c.group, c.name, c.n,
                                              c.expected, c.actual)))
    else:
        print(report.to_text())
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_fset(args) -> int:
    if args.fset_command == "merge":
        h = store.merge_sorted(args.inputs, args.out)
        print(h.count)
    elif args.fset_command == "sort":
        h = store.external_sort(args.input, args.out)
        print(h.count)
    else:
        h = store.header_of(args.input)
        data = {"n": h.n, "count": h.count, "sorted": h.sorted, "signatures": h.has_signatures}
        if args.format == "json":
            print(json.dumps(data, sort_keys=True))
        else:
            print(" ".join(f"{k}={v}" for k, v in data.items()))
    return EXIT_OK


COMMANDS = {"enumerate": cmd_enumerate, "count": cmd_count, "classes": cmd_classes,
            "verify": cmd_verify, "fset": cmd_fset}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        _validate(args)
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, UsageError) or _is_usage(exc) else EXIT_INTERNAL
    except ResourceLimitExceeded as exc:
        print(f"error: {exc} (use --allow-large)", file=sys.stderr)
        return EXIT_GUARD
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def _is_usage(exc: ValueError) -> bool:
    return "supports" in str(exc) or "unknown class" in str(exc)


if __name__ == "__main__":
    sys.exit(main())
