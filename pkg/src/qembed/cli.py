"""Command-line front end: ``qembed {analyze,report,embed,tree,selftest}``.

Exit codes: 0 success, 1 usage error, 2 input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .counting import Backend, CountBackend
from .embedder import Scheme, dump_embedding, embed, verify_embedding
from .errors import QembedError
from .function import histogram
from .phcoder import build_ph_tree, render_dot, render_text, theorem_selftest
from .pla_io import load_function
from .report import (
    RunConfig,
    analyze,
    analyze_batch,
    expand_inputs,
    format_summary,
    report_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_input_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["auto", "pla", "tt"], default="auto")
    p.add_argument(
        "--backend", choices=[b.value for b in Backend], default=Backend.COFACTOR.value
    )
    p.add_argument(
        "--implicit-zero", action="store_true",
        help="treat minterms covered by no row as output 0...0",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qembed", description="Coded embeddings of Boolean functions")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="histogram, code table and qubit counts")
    p.add_argument("inputs", nargs="+")
    _add_input_options(p)
    p.add_argument("--skip-reversible", action="store_true")

    p = sub.add_parser("report", help="CSV of qubit counts for a set of files")
    p.add_argument("inputs", nargs="+", help="files or directories")
    _add_input_options(p)
    p.add_argument("--skip-reversible", action="store_true")
    p.add_argument("-o", "--output", type=Path)
    p.add_argument("-j", "--jobs", type=int, help="worker threads (default: $QEMBED_THREADS)")

    p = sub.add_parser("embed", help="write a reversible embedding table")
    p.add_argument("input")
    _add_input_options(p)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default="coded")
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("tree", help="dump the Pseudo-Huffman tree")
    p.add_argument("input")
    _add_input_options(p)
    p.add_argument("--style", choices=["dot", "text"], default="dot")
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("selftest", help="randomised check of the n / n+1 bound")
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _config(args, emit: str) -> RunConfig:
    inputs = getattr(args, "inputs", None) or [args.input]
    return RunConfig(
        inputs=tuple(Path(i) for i in inputs),
        format=args.format,
        backend=CountBackend(Backend(args.backend)),
        implicit_zero=args.implicit_zero,
        skip_reversible=getattr(args, "skip_reversible", False),
        emit=emit,
        output_path=getattr(args, "output", None),
    )


def _write(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def cmd_analyze(args) -> int:
    cfg = _config(args, "summary")
    status = EXIT_OK
    for path in expand_inputs(cfg.inputs, cfg.format):
        try:
            a = analyze(path, cfg)
        except (QembedError, OSError) as exc:
            print(f"{path}: {type(exc).__name__}: {exc}", file=sys.stderr)
            status = EXIT_INPUT
            continue
        if cfg.skip_reversible and a.reversible:
            print(f"{a.function.name}: reversible, skipped")
            continue
        sys.stdout.write(format_summary(a))
    return status


def cmd_report(args) -> int:
    cfg = _config(args, "csv")
    paths = expand_inputs(cfg.inputs, cfg.format)
    if not paths:
        print("no input files found", file=sys.stderr)
        return EXIT_INPUT
    batch = analyze_batch(paths, cfg, workers=args.jobs)
    for path, err in batch.errors:
        print(f"{path}: {err}", file=sys.stderr)
    if batch.reports:
        _write(report_csv(batch.reports), cfg.output_path)
    return EXIT_INPUT if batch.errors or not batch.reports else EXIT_OK


def cmd_embed(args) -> int:
    cfg = _config(args, "embedding")
    f = load_function(args.input, cfg.format)
    h = histogram(f, cfg.backend, implicit_zero=cfg.implicit_zero)
    spec = embed(f, args.scheme, h, implicit_zero=cfg.implicit_zero)
    report = verify_embedding(spec, f, implicit_zero=cfg.implicit_zero)
    _write(dump_embedding(spec), cfg.output_path)
    print(f"{f.name}: {spec.scheme.value} embedding, width {spec.width}; {report}",
          file=sys.stderr if cfg.output_path is None else sys.stdout)
    return EXIT_OK if report.passed else EXIT_INPUT


def cmd_tree(args) -> int:
    cfg = _config(args, "tree-dot")
    f = load_function(args.input, cfg.format)
    tree = build_ph_tree(histogram(f, cfg.backend, implicit_zero=cfg.implicit_zero))
    text = render_dot(tree, f.name) if args.style == "dot" else render_text(tree)
    _write(text, cfg.output_path)
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.iterations < 1 or args.max_n < 1:
        print("selftest: --iterations and --max-n must be positive", file=sys.stderr)
        return EXIT_USAGE
    res = theorem_selftest(args.iterations, args.max_n, args.seed)
    for line in res.failures[:10]:
        print(line, file=sys.stderr)
    print(f"theorem holds: {res.passed}/{res.iterations}")
    return EXIT_OK if res.ok else EXIT_INPUT


COMMANDS = {
    "analyze": cmd_analyze,
    "report": cmd_report,
    "embed": cmd_embed,
    "tree": cmd_tree,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (QembedError, OSError) as exc:
        print(f"qembed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
