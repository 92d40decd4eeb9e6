"""Command-line entry point: ``render <kind> --in <files> --out <image>``."""

from __future__ import annotations

import argparse
import sys

from .errors import RenderError
from .figures import FIGURE_KINDS, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Draw a static figure from polopt JSON outputs",
    )
    parser.add_argument("kind", choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="FILE", help="input JSON document(s)")
    parser.add_argument("--out", required=True, help="output image path "
                        "(format from extension; .svg recommended)")
    parser.add_argument("--title", help="optional figure title")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        count = render(args.kind, args.inputs, args.out, title=args.title)
    except RenderError as exc:
        print(f"render: {exc}", file=sys.stderr)
        return 2
    print(f"render {args.kind}: {count} data points -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
