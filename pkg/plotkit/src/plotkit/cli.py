"""plotkit command line: `plotkit <figure-kind> --in CSV [--in2 CSV] --out IMG`."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_KINDS, PlotError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit", description="Render daqsim CSV outputs as figures."
    )
    parser.add_argument("kind", help=f"figure kind: {', '.join(FIGURE_KINDS)}")
    parser.add_argument("--in", dest="input_csv", required=True, help="input CSV")
    parser.add_argument("--in2", dest="second_csv", help="optional overlay CSV")
    parser.add_argument("--out", dest="output_image", required=True, help="output image")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(
            kind=args.kind,
            input_csv=Path(args.input_csv),
            output_image=Path(args.output_image),
            second_csv=Path(args.second_csv) if args.second_csv else None,
        )
        out = render(spec)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
