"""``mpeg7desc`` command line: extract, validate, query, stats."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .cld import CldWeights
from .corpus import BatchConfig, ExtractParams, describe, run_batch
from .descriptor_io import Kind, iter_descriptor_files, read_synset_file
from .ehd import DEFAULT_DESIRED_BLOCKS, DEFAULT_THRESHOLD
from .errors import DecodeError, ExtensionError, ImageTooSmall, ParseError
from .imaging import load_image
from .search import build_index, knn_query

REPORT_FILE = "report.txt"


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _weights(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None


def _add_ehd_flags(p):
    p.add_argument("--ehd-threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="edge strength threshold (default %(default)s)")
    p.add_argument("--ehd-blocks", type=_positive_int, default=DEFAULT_DESIRED_BLOCKS,
                   help="desired number of EHD image-blocks (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpeg7desc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="batch-extract descriptors from a synset tree")
    p.add_argument("--root", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--cld", action="store_true")
    p.add_argument("--ehd", action="store_true")
    p.add_argument("--workers", type=_positive_int, default=os.cpu_count() or 1)
    _add_ehd_flags(p)

    p = sub.add_parser("validate", help="strictly parse every .cld/.ehd file in a directory")
    p.add_argument("--dir", required=True, type=Path)

    p = sub.add_parser("query", help="k nearest neighbours of an image")
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--kind", required=True, choices=["cld", "ehd"])
    p.add_argument("--image", required=True, type=Path)
    p.add_argument("--k", type=_positive_int, default=10)
    p.add_argument("--wy", type=_weights, default=(2, 2, 2),
                   help="leading Y weights, rest 1 (default 2,2,2)")
    p.add_argument("--wcb", type=_weights, default=(2,), help="leading Cb weights (default 2)")
    p.add_argument("--wcr", type=_weights, default=(2,), help="leading Cr weights (default 2)")
    _add_ehd_flags(p)

    p = sub.add_parser("stats", help="file and record counts per descriptor kind")
    p.add_argument("--dir", required=True, type=Path)
    return parser


def cmd_extract(args, parser) -> int:
    if not args.root.is_dir():
        parser.error(f"--root {args.root} is not a directory")
    kinds = {k for k, on in ((Kind.CLD, args.cld), (Kind.EHD, args.ehd)) if on}
    if not kinds:
        parser.error("select at least one of --cld / --ehd")
    config = BatchConfig(args.root, args.out, kinds, args.workers,
                         args.ehd_threshold, args.ehd_blocks)
    report = run_batch(config)
    kv = report.as_key_values()
    (config.out_dir / REPORT_FILE).write_text("".join(f"{k}={v}\n" for k, v in kv))
    print(f"{report.synsets_processed} synsets, {report.images_processed} processed, "
          f"{len(report.images_skipped)} skipped in {report.wall_time:.2f}s")
    for path, reason in report.images_skipped:
        print(f"skipped\t{path}\t{reason}")
    for sid, err in report.failed_synsets:
        print(f"FAILED synset {sid}: {err}", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_validate(args, parser) -> int:
    if not args.dir.is_dir():
        parser.error(f"--dir {args.dir} is not a directory")
    files = iter_descriptor_files(args.dir)
    if not files:
        print("0 files")
        return 0
    bad = 0
    for path in files:
        try:
            sfile = read_synset_file(path)
        except (ParseError, OSError) as exc:
            bad += 1
            print(f"FAIL\t{path.name}\t{_describe_error(exc)}")
        else:
            print(f"OK\t{path.name}\t{len(sfile.records)} records")
    print(f"{len(files)} files, {bad} invalid")
    return 1 if bad else 0


def _describe_error(exc) -> str:
    if isinstance(exc, ParseError):
        return f"line {exc.line_number}: {exc.reason}: {exc.detail}"
    return str(exc)


def cmd_query(args, parser) -> int:
    if not args.dir.is_dir():
        parser.error(f"--dir {args.dir} is not a directory")
    kind = Kind.parse(args.kind)
    try:
        files = [read_synset_file(p) for p in iter_descriptor_files(args.dir, kind)]
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    index = build_index(files, kind=kind)
    if len(index) == 0:
        print("error: empty index", file=sys.stderr)
        return 1
    try:
        image = load_image(args.image)
        params = ExtractParams(args.ehd_threshold, args.ehd_blocks)
        query = describe(image, {kind}, params)[kind]
    except (DecodeError, ImageTooSmall, OSError) as exc:
        print(f"error: {args.image}: {exc}", file=sys.stderr)
        return 1
    weights = CldWeights.from_prefixes(args.wy, args.wcb, args.wcr)
    for rank, (image_id, dist) in enumerate(knn_query(index, query, args.k, weights), start=1):
        print(f"{rank}\t{image_id}\t{dist:.4f}")
    return 0


def cmd_stats(args, parser) -> int:
    if not args.dir.is_dir():
        parser.error(f"--dir {args.dir} is not a directory")
    per_kind = {}
    for path in iter_descriptor_files(args.dir):
        try:
            sfile = read_synset_file(path)
        except (ParseError, ExtensionError, OSError) as exc:
            print(f"error: {path.name}: {_describe_error(exc)}", file=sys.stderr)
            return 1
        per_kind.setdefault(sfile.kind, []).append(len(sfile.records))
    if not per_kind:
        print("0 files")
    for kind in (Kind.CLD, Kind.EHD):
        counts = per_kind.get(kind)
        if counts:
            print(f"{kind.ext}: {len(counts)} files, {sum(counts)} records "
                  f"(min {min(counts)}, max {max(counts)} per file)")
    return 0


COMMANDS = {"extract": cmd_extract, "validate": cmd_validate, "query": cmd_query, "stats": cmd_stats}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, parser)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
