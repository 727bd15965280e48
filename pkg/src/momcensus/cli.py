"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 I/O error, 3 stopped on a
budget or interrupt with a checkpoint written.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .complexcheck import filter_pairing
from .formats import FormatError, emit_description, format_triangulation, parse_description
from .groups import format_presentation
from .kernels import IMPLEMENTATION
from .pipeline import (
    InvariantError,
    SurveyInterrupted,
    SurveyIOError,
    analyze_pairing,
    manifest_stats,
    run_survey,
    subdivide_to_tetrahedra,
)
from .polyhedra import MODES, ROTATIONAL, DipyramidSpec, SpecError, pyramid_sets_for_mom

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=1))


def cmd_sets(args) -> int:
    try:
        specs = pyramid_sets_for_mom(args.n)
    except SpecError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    for spec in specs:
        print("{" + ",".join(map(str, spec.sides)) + "}")
    return EXIT_OK


def cmd_survey(args) -> int:
    specs = None
    if args.spec:
        try:
            specs = [DipyramidSpec.of(int(x) for x in s.split(",")) for s in args.spec]
        except (ValueError, SpecError) as exc:
            print(f"bad --spec: {exc}", file=sys.stderr)
            return EXIT_INVALID
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    try:
        summary = run_survey(args.n, args.out, args.mode, args.workers, args.resume, specs=specs,
                             groups=not args.no_groups, max_shards=args.max_shards,
                             time_budget=args.time_budget, progress=progress)
    except SurveyInterrupted as exc:
        print(f"{exc}; resume with --resume (checkpoint {exc.checkpoint})", file=sys.stderr)
        return EXIT_BUDGET
    except (SurveyIOError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FormatError, ValueError) as exc:
        print(f"invalid survey request: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _print_json(summary)
    return EXIT_OK


def _description(text: str):
    try:
        return parse_description(text)
    except FormatError as exc:
        print(f"invalid description: {exc}", file=sys.stderr)
        return None


def cmd_analyze(args) -> int:
    parsed = _description(args.description)
    if parsed is None:
        return EXIT_INVALID
    spec, perm = parsed
    outcome = filter_pairing(spec, perm, args.mode)
    result = {"description": emit_description(spec, perm), "passed": outcome.passed,
              "reason": outcome.reason}
    if outcome.passed:
        try:
            rec = analyze_pairing(spec, perm)
        except InvariantError as exc:
            print(f"invariant violated: {exc}", file=sys.stderr)
            return EXIT_INVALID
        result.update({k: v for k, v in rec.to_manifest().items() if k not in ("spec", "pairing")})
        result["h1"] = str(rec.h1)
        result["presentation"] = format_presentation(rec.presentation)
    elif outcome.vertex >= 0:
        result["vertex"] = outcome.vertex
    _print_json(result)
    return EXIT_OK


def cmd_parse(args) -> int:
    try:
        with open(args.file) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    status = EXIT_OK
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            spec, perm = parse_description(line)
        except FormatError as exc:
            print(f"{args.file}:{lineno}: {type(exc).__name__}: {exc}", file=sys.stderr)
            status = EXIT_INVALID
            continue
        print(emit_description(spec, perm))
    return status


def cmd_export_tri(args) -> int:
    parsed = _description(args.description)
    if parsed is None:
        return EXIT_INVALID
    spec, perm = parsed
    outcome = filter_pairing(spec, perm)
    if not outcome.passed:
        print(f"pairing does not pass the filter: {outcome.reason}", file=sys.stderr)
        return EXIT_INVALID
    text = format_triangulation(subdivide_to_tetrahedra(spec, perm))
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
        if args.presentation:
            with open(args.presentation, "w") as fh:
                fh.write(format_presentation(analyze_pairing(spec, perm).presentation))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_stats(args) -> int:
    try:
        stats = manifest_stats(args.manifest)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FormatError as exc:
        print(f"invalid manifest: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _print_json(stats)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momcensus", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({IMPLEMENTATION} kernel)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sets", help="dipyramid collections dual to a Mom-n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_sets)

    p = sub.add_parser("survey", help="enumerate, filter and analyze all candidates for Mom-n")
    p.add_argument("n", type=int, choices=(2, 3, 4))
    p.add_argument("--mode", choices=MODES, default=ROTATIONAL)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--spec", action="append", help="restrict to a collection such as 3,3,4 (repeatable)")
    p.add_argument("--no-groups", action="store_true", help="skip presentations and homology")
    p.add_argument("--max-shards", type=int, help="stop after this many shards")
    p.add_argument("--time-budget", type=float, help="stop after this many seconds")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("analyze", help="filter and analyze one description")
    p.add_argument("description")
    p.add_argument("--mode", choices=MODES, default=ROTATIONAL)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("parse", help="validate and normalize a file of descriptions")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("export-tri", help="write the tetrahedral subdivision of a survivor")
    p.add_argument("description")
    p.add_argument("--out", required=True)
    p.add_argument("--presentation", help="also write the simplified presentation here")
    p.set_defaults(func=cmd_export_tri)

    p = sub.add_parser("stats", help="summarize a survey manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        print("--workers must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
