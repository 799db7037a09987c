"""Command line entry point: one image per invocation."""

import argparse
import sys

from .render import render
from .spec import FigureSpec
from .tables import FigureError

_KINDS = (
    ("sweep", "probability against a sweep parameter, red region shaded"),
    ("trace", "population trace, one labeled curve per level"),
    ("overlay", "GAIA points over oracle curves against time"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figures from gaialz CSV output.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, blurb in _KINDS:
        cmd = sub.add_parser(kind, help=blurb)
        cmd.add_argument(
            "--csv",
            action="append",
            required=True,
            metavar="PATH",
            help="input CSV; repeat for a second table where the kind allows it",
        )
        cmd.add_argument("--out", required=True, metavar="PATH", help="output image")
        cmd.add_argument("--xlabel", help="x axis label override")
        cmd.add_argument("--ylabel", help="y axis label override")
        cmd.add_argument(
            "--red-boundary",
            type=float,
            default=None,
            metavar="MARGIN",
            help="shade where the margin column is below this value "
            "instead of where the status column says RED",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            csv_paths=tuple(args.csv),
            out_path=args.out,
            xlabel=args.xlabel,
            ylabel=args.ylabel,
            red_boundary=args.red_boundary,
        )
        render(spec)
    except (FigureError, OSError) as err:
        print(f"figures: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
