"""Command-line front end.

    safework <subcommand> <model-file> [flags]

Subcommands select an analysis subset; ``report`` runs everything.  Exit
codes: 0 = pass (warnings allowed unless --strict), 1 = fail, or warnings
under --strict, 2 = usage or load error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .model import ModelError, load_model
from .report import ALL_SECTIONS, build_report, emit_report

SUBCOMMAND_SECTIONS: dict[str, tuple[str, ...]] = {
    "validate": ("model",),
    "score": ("rigor", "state_machines"),
    "hara": ("hara",),
    "hw": ("hw",),
    "frc": ("frc",),
    "sotif": ("sotif",),
    "trace": ("trace",),
    "cca": ("cca",),
    "report": ALL_SECTIONS,
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _unit_float(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="safework",
        description="Batch functional-safety analysis over a declared safety model.")
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, sections in SUBCOMMAND_SECTIONS.items():
        sub = subparsers.add_parser(name, help=f"run sections: {', '.join(sections)}")
        sub.add_argument("model_file", help="path to the model JSON file")
        sub.add_argument("--format", choices=("text", "json"), default="text")
        sub.add_argument("--out", metavar="FILE", default=None,
                         help="write the report here instead of stdout")
        sub.add_argument("--strict", action="store_true",
                         help="promote warnings to failures; reject unknown keys")
        sub.add_argument("--seed", type=int, default=0,
                         help="Monte-Carlo seed (default 0)")
        sub.add_argument("--mc-samples", type=_positive_int, default=100_000,
                         help="Monte-Carlo trial count (default 100000)")
        sub.add_argument("--cca-threshold", type=_unit_float, default=0.8,
                         help="credibility threshold for gap findings (default 0.8)")
        if name == "report":
            sub.add_argument("--figures", metavar="DIR", default=None,
                             help="also render figures and CSVs into DIR")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)

    path = Path(args.model_file)
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"safework: cannot read {path}: {exc}", file=sys.stderr)
        return 2

    try:
        model = load_model(source, strict=args.strict)
        report = build_report(
            model, SUBCOMMAND_SECTIONS[args.subcommand],
            seed=args.seed, mc_samples=args.mc_samples,
            cca_threshold=args.cca_threshold, strict=args.strict)
    except ModelError as exc:
        print(f"safework: {path}: {exc}", file=sys.stderr)
        return 2

    output = emit_report(report, args.format)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)

    if getattr(args, "figures", None):
        from .figures import render_figures
        for written in render_figures(report, args.figures):
            print(f"safework: wrote {written}", file=sys.stderr)

    verdict = report.overall_verdict
    if verdict == "fail":
        return 1
    if verdict == "pass_with_warnings" and args.strict:
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
