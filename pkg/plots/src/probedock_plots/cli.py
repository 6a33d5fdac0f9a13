"""Command line for rendering image-error figures from log CSVs.

Exit 0 on success, 1 on any input or schema problem.
"""

from __future__ import annotations

import argparse
import sys

from .csvreader import LogSchemaError
from .figures import DEFAULT_COLUMNS, FigureSpec, plot_error_timeseries


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probedock-plots", description=__doc__.splitlines()[0]
    )
    parser.add_argument("inputs", nargs="+", help="one or more simulator log CSVs")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default="", help="figure title")
    parser.add_argument(
        "--label",
        action="append",
        default=[],
        help="trace label, once per input (default: file stem)",
    )
    parser.add_argument(
        "--column",
        action="append",
        default=[],
        help=f"column to plot, repeatable (default: {', '.join(DEFAULT_COLUMNS)})",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            inputs=tuple(args.inputs),
            output=args.out,
            title=args.title,
            labels=tuple(args.label),
            columns=tuple(args.column) or DEFAULT_COLUMNS,
        )
        path = plot_error_timeseries(spec)
    except (LogSchemaError, ValueError) as exc:
        print(f"probedock-plots: error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
