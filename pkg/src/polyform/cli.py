"""Command-line surface: enumerate, validate, export, compare, pack.

Exit codes are stable: 0 success, 1 usage or parse error, 2 resource or
search limit stop, 3 validation/comparison failure, 4 missing render
data, 5 nothing to compare.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .canonical import SymmetryMode
from .enumeration import MemoryLimitExceeded, enumerate_counts
from .export import MissingRenderData, form_to_off, form_to_svg, gallery_svg
from .oeis import BFileError, compare, fetch_bfile, parse_bfile
from .packing import load_instance, solve_pack
from .exact import parse_point
from .tiling import TilingParseError, resolve_tiling, validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_LIMIT = 2
EXIT_VALIDATION = 3
EXIT_NO_RENDER = 4
EXIT_NO_OVERLAP = 5


def _counts_json(result) -> str:
    return json.dumps({
        "schema": 1,
        "tiling": result.tiling,
        "mode": result.mode.value,
        "counts": [{"n": n, "count": c} for n, c in result.counts],
        "partial": result.partial,
    }, indent=None)


def cmd_enumerate(args) -> int:
    try:
        spec = resolve_tiling(args.tiling)
        mode = SymmetryMode.parse(args.mode)
    except (TilingParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = enumerate_counts(
            spec, mode, args.max_n,
            pruned=args.pruned, threads=args.threads,
            emit_path=args.emit_forms, memory_limit=args.memory_limit,
        )
    except MemoryLimitExceeded as exc:
        result = exc.result
        if args.json:
            print(_counts_json(result))
        else:
            for n, c in result.counts:
                print(n, c)
            print(f"# partial: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if args.json:
        print(_counts_json(result))
    else:
        for n, c in result.counts:
            print(n, c)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.radius < 1:
        print("error: --radius must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        spec = resolve_tiling(args.tiling)
    except (TilingParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = validate(spec, radius=args.radius)
    ok = True
    for check in report.checks:
        status = "ok" if check.passed else "FAIL"
        print(f"{check.name}: {status}")
        if not check.passed:
            ok = False
            for detail in check.details[:10]:
                print(f"  {detail}")
    return EXIT_OK if ok else EXIT_VALIDATION


def _read_forms_file(path: str):
    forms = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            forms.append([parse_point(part) for part in line.split(";")])
    return forms


def cmd_export(args) -> int:
    try:
        spec = resolve_tiling(args.tiling)
    except (TilingParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.form:
            forms = [[parse_point(part) for part in args.form.split(";")]]
        else:
            forms = _read_forms_file(args.forms)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not forms:
        print("error: no forms to export", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.format == "svg":
            if args.gallery:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(gallery_svg(spec, forms))
            elif len(forms) == 1:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(form_to_svg(spec, forms[0]))
            else:
                base = args.output
                stem, dot, ext = base.rpartition(".")
                if not dot:
                    stem, ext = base, "svg"
                for i, cells in enumerate(forms, start=1):
                    with open(f"{stem}-{i}.{ext}", "w", encoding="utf-8") as fh:
                        fh.write(form_to_svg(spec, cells))
        else:
            if len(forms) == 1:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(form_to_off(spec, forms[0]))
            else:
                stem, dot, ext = args.output.rpartition(".")
                if not dot:
                    stem, ext = args.output, "off"
                for i, cells in enumerate(forms, start=1):
                    with open(f"{stem}-{i}.{ext}", "w", encoding="utf-8") as fh:
                        fh.write(form_to_off(spec, cells))
    except MissingRenderData as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_RENDER
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _read_counts(source: str):
    if source == "-":
        text = sys.stdin.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return [(int(e["n"]), int(e["count"])) for e in data["counts"]]
    counts = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        n, c = line.split()
        counts.append((int(n), int(c)))
    return counts


def cmd_compare(args) -> int:
    try:
        counts = _read_counts(args.counts)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: bad counts input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.bfile:
            seq = args.sequence or "A000000"
            with open(args.bfile, "r", encoding="utf-8") as fh:
                bfile = parse_bfile(fh.read(), seq)
        else:
            bfile = fetch_bfile(args.fetch, cache_dir=args.cache_dir, offline=args.offline)
    except (BFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = compare(counts, bfile)
    print(report.render())
    if report.overlapping == 0:
        print("error: nothing to compare", file=sys.stderr)
        return EXIT_NO_OVERLAP
    return EXIT_OK if report.verdict == "match" else EXIT_VALIDATION


def cmd_pack(args) -> int:
    try:
        spec, region, pieces, group = load_instance(args.instance)
    except (TilingParseError, ValueError, OSError, KeyError) as exc:
        print(f"error: bad instance: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = solve_pack(
        spec, region, pieces, group,
        count_all=args.count_all, first=args.first, limit=args.limit,
        limit_time=args.limit_time,
        modulo_region_symmetry=args.modulo_region_symmetry,
    )
    print(f"solutions: {result.raw_count}{'' if result.complete else '+ (limit reached)'}")
    if args.modulo_region_symmetry:
        print(f"modulo region symmetry: {result.modulo_region_symmetry}")
    if args.show_solutions:
        for i, sol in enumerate(result.solutions, start=1):
            print(f"solution {i}:")
            for pl in sol:
                cells = ";".join(
                    ",".join(str(c) for c in p) for p in sorted(pl.covered)
                )
                print(f"  piece {pl.piece}: {cells}")
    return EXIT_OK if result.complete else EXIT_LIMIT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyform",
        description="Enumerate, validate, render, verify and pack polyforms on periodic tilings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count polyforms level by level")
    p.add_argument("--tiling", required=True, help="built-in tiling name or path to a tiling file")
    p.add_argument("--mode", default="free", choices=["free", "one-sided", "fixed"])
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--emit-forms", metavar="DIR", default=None)
    p.add_argument("--pruned", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--memory-limit", type=int, default=None, metavar="BYTES")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("validate", help="run consistency checks on a tiling file")
    p.add_argument("--tiling", required=True)
    p.add_argument("--radius", type=int, default=4)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export", help="render forms to SVG or OFF")
    p.add_argument("--tiling", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--forms", metavar="FILE", help="emission file of serialized forms")
    group.add_argument("--form", metavar="STRING", help="one serialized form")
    p.add_argument("--format", required=True, choices=["svg", "off"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--gallery", action="store_true", help="tile all forms into one SVG")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("compare", help="check counts against an OEIS b-file")
    p.add_argument("--counts", required=True, metavar="FILE|-")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--bfile", metavar="PATH")
    group.add_argument("--fetch", metavar="AXXXXXX")
    p.add_argument("--sequence", default=None, help="sequence id label for --bfile input")
    p.add_argument("--offline", action="store_true")
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pack", help="solve a packing instance")
    p.add_argument("--instance", required=True, metavar="FILE")
    stop = p.add_mutually_exclusive_group()
    stop.add_argument("--count-all", action="store_true")
    stop.add_argument("--first", action="store_true")
    stop.add_argument("--limit", type=int, default=None, metavar="K")
    p.add_argument("--limit-time", type=float, default=None, metavar="SECONDS")
    p.add_argument("--modulo-region-symmetry", action="store_true")
    p.add_argument("--show-solutions", action="store_true")
    p.set_defaults(func=cmd_pack)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
