"""Command-line front end: ``analyze``, ``verify``, ``corpus-stats`` and ``dot``.

Exit codes: 0 success, 1 parse or semantic errors (reports for the good
functions are still written), 2 unreadable input, 3 a controlled function
whose ACPATH disagrees with the oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from . import ast as A
from .acpath import acpath_body, is_controlled
from .cfg import build_body_cfg, to_dot
from .harness import differential_check
from .npath import NpathConfig, npath_body
from .oracle import OracleBudget
from .parser import SourceFile, parse_translation_unit
from .report import (EmptyCorpus, FunctionReport, NonPositiveValue, read_jsonl,
                     stats_from_reports, to_csv, to_jsonl, to_text)

EXIT_OK, EXIT_SYNTAX, EXIT_IO, EXIT_MISMATCH = 0, 1, 2, 3


class FunctionNotFound(LookupError):
    pass


@dataclass(frozen=True)
class Options:
    opt_level: int = 2
    metric: str = "both"
    verify: bool = False
    max_oracle_nodes: int = 64
    npath_clamp: bool = False
    while_return_scaling: bool = False


def load(path: str) -> SourceFile:
    with open(path, encoding="utf-8") as fh:
        return SourceFile(path, fh.read())


def parse_checked(src: SourceFile, err: TextIO) -> tuple[list[A.FunctionBody], bool]:
    """Functions of ``src`` that parse and validate; the flag is False on any error."""
    functions, errors = parse_translation_unit(src)
    for e in errors:
        print(f"{src.path}:{e}", file=err)
    good = []
    for fb in functions:
        problems = A.validate_body(fb)
        for p in problems:
            print(f"{src.path}:{p} (in {fb.name})", file=err)
        if not problems:
            good.append(fb)
    return good, not errors and len(good) == len(functions)


def report_function(path: str, fb: A.FunctionBody, opts: Options) -> FunctionReport:
    want_ac = opts.metric in ("acpath", "both") or opts.verify
    want_np = opts.metric in ("npath", "both")
    verify = None
    if opts.verify:
        v = differential_check(fb, opts.opt_level, OracleBudget(max_nodes=opts.max_oracle_nodes),
                               opts.while_return_scaling)
        verify = {"alpha": v.alpha, "match": v.match}
        if v.note:
            verify["note"] = v.note
        if v.quarantined:
            verify["quarantined"] = True
        ac = v.acpath
    else:
        ac = acpath_body(fb, opts.opt_level, opts.while_return_scaling) if want_ac else None
    return FunctionReport(
        file=path, function=fb.name, line=fb.line,
        acpath=ac if opts.metric != "npath" or opts.verify else None,
        npath=npath_body(fb, NpathConfig(opts.npath_clamp)) if want_np else None,
        opt_level=opts.opt_level,
        controlled=is_controlled(fb).controlled,
        verify=verify,
    )


def analyze_paths(paths: Sequence[str], opts: Options, err: TextIO = sys.stderr,
                  sort: bool = False) -> tuple[list[FunctionReport], int]:
    reports: list[FunctionReport] = []
    code = EXIT_OK
    for path in paths:
        try:
            src = load(path)
        except (OSError, UnicodeDecodeError) as exc:
            print(f"{path}: cannot read: {exc}", file=err)
            code = EXIT_IO
            continue
        functions, clean = parse_checked(src, err)
        if not clean and code == EXIT_OK:
            code = EXIT_SYNTAX
        reports.extend(report_function(path, fb, opts) for fb in functions)
    if sort:
        reports.sort(key=lambda r: (r.file, r.line, r.function))
    return reports, code


def _emit(reports, fmt: str, out: TextIO) -> None:
    if fmt == "json":
        out.write(to_jsonl(reports))
    elif fmt == "csv":
        out.write(to_csv(reports))
    else:
        out.write(to_text(reports))


def cmd_analyze(args, out: TextIO, err: TextIO) -> int:
    opts = Options(args.opt_level, args.metric, args.verify, args.max_oracle_nodes,
                   args.npath_clamp, args.while_return_scaling)
    reports, code = analyze_paths(args.paths, opts, err, args.sorted)
    _emit(reports, args.format, out)
    if code == EXIT_OK and args.verify and _controlled_mismatch(reports):
        code = EXIT_MISMATCH
    return code


def _controlled_mismatch(reports) -> bool:
    return any(r.controlled and r.verify and r.verify["match"] is False for r in reports)


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    opts = Options(args.opt_level, "both", True, args.max_oracle_nodes,
                   False, args.while_return_scaling)
    reports, code = analyze_paths(args.paths, opts, err, args.sorted)
    _emit(reports, args.format, out)
    if code == EXIT_IO:
        return code
    return EXIT_MISMATCH if _controlled_mismatch(reports) else code


def cmd_corpus_stats(args, out: TextIO, err: TextIO) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            reports = read_jsonl(fh.read())
    except (OSError, UnicodeDecodeError, ValueError, KeyError) as exc:
        print(f"{args.report}: cannot read report: {exc}", file=err)
        return EXIT_IO
    try:
        stats = stats_from_reports(reports, strict=args.strict)
    except NonPositiveValue as exc:
        print(f"{args.report}: {exc}", file=err)
        return EXIT_SYNTAX
    except EmptyCorpus as exc:
        print(f"{args.report}: {exc}", file=err)
        return EXIT_SYNTAX
    if stats.excluded:
        print(f"{args.report}: excluded {stats.excluded} record(s) with a metric below 1",
              file=err)
    if args.format == "json":
        out.write(json.dumps(stats.to_dict(), indent=2) + "\n")
    else:
        out.write(_stats_text(stats))
    return EXIT_OK


def _stats_text(s) -> str:
    lines = [
        f"functions           {s.n}",
        f"excluded            {s.excluded}",
        f"pearson r           {s.pearson_r:.6f}",
        f"mean error          {s.mean_error:.6f}",
        f"stddev error        {s.stddev_error:.6f}",
        f"skew acpath raw     {s.skew_raw['acpath']:.6f}",
        f"skew npath raw      {s.skew_raw['npath']:.6f}",
        f"skew acpath loglog  {s.skew_transformed['acpath']:.6f}",
        f"skew npath loglog   {s.skew_transformed['npath']:.6f}",
    ]
    for k, t in s.thresholds.items():
        lines.append(f"threshold {k:<4}      acpath>{k}&npath<={k}: {t['acpath_over_npath_within']}"
                     f"  acpath<={k}&npath>{k}: {t['acpath_within_npath_over']}"
                     f"  both over: {t['both_over']}  both within: {t['both_within']}")
    return "\n".join(lines) + "\n"


def find_function(src: SourceFile, name: str) -> A.FunctionBody:
    functions, _ = parse_translation_unit(src)
    for fb in functions:
        if fb.name == name:
            return fb
    raise FunctionNotFound(name)


def cmd_dot(args, out: TextIO, err: TextIO) -> int:
    try:
        src = load(args.path)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{args.path}: cannot read: {exc}", file=err)
        return EXIT_IO
    try:
        fb = find_function(src, args.function)
    except FunctionNotFound:
        print(f"{args.path}: no function named '{args.function}'", file=err)
        return EXIT_SYNTAX
    problems = A.validate_body(fb)
    if problems:
        for p in problems:
            print(f"{args.path}:{p}", file=err)
        return EXIT_SYNTAX
    out.write(to_dot(build_body_cfg(fb, args.opt_level), fb.name))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathmetric",
                                 description="Acyclic path counts (ACPATH) and NPATH for C functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def level(p):
        p.add_argument("--opt-level", type=int, choices=(0, 1, 2), default=2,
                       help="constant folding in guards: 0 none, 1 literals, 2 constant expressions")

    def common(p):
        level(p)
        p.add_argument("--max-oracle-nodes", type=int, default=64,
                       help="skip the brute-force count on larger CFGs")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text",
                       help="json writes one record per line")
        p.add_argument("--while-return-scaling", action="store_true",
                       help="scale returns leaving a while body by the guard's true paths")
        p.add_argument("--sorted", action="store_true",
                       help="order records by file, line and name")

    p = sub.add_parser("analyze", help="report ACPATH and NPATH per function")
    p.add_argument("paths", nargs="*")
    common(p)
    p.add_argument("--metric", choices=("acpath", "npath", "both"), default="both")
    p.add_argument("--verify", action="store_true", help="also count paths on the CFG")
    p.add_argument("--npath-clamp", action="store_true",
                   help="let expression statements count at least 1 in NPATH")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("verify", help="compare ACPATH with a brute-force path count")
    p.add_argument("paths", nargs="*")
    common(p)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("corpus-stats", help="statistics over a JSONL report")
    p.add_argument("report")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--strict", action="store_true",
                   help="fail instead of skipping records with a metric below 1")
    p.set_defaults(run=cmd_corpus_stats)

    p = sub.add_parser("dot", help="Graphviz rendering of a function's CFG")
    p.add_argument("path")
    p.add_argument("function")
    level(p)
    p.set_defaults(run=cmd_dot)
    return ap


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    return args.run(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
