"""Command-line entry point: plotgen --csv PATH --kind fig3|fig5 --out PATH."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureKind, FigureSpec, PlotgenError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotgen",
        description="Render key-rate figures from sweep CSV output.",
    )
    parser.add_argument("--csv", required=True, metavar="PATH", help="sweep CSV file")
    parser.add_argument(
        "--kind",
        required=True,
        choices=[k.value for k in FigureKind],
        help="fig3: conventional/trusted/two amplifier gains; "
        "fig5: conventional/trusted/attenuator with shaded insecure region",
    )
    parser.add_argument(
        "--out", required=True, metavar="PATH.svg|PATH.png", help="output image path"
    )
    parser.add_argument("--x-range", type=float, nargs=2, metavar=("LO", "HI"))
    parser.add_argument("--y-range", type=float, nargs=2, metavar=("LO", "HI"))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        csv_path=args.csv,
        figure_kind=FigureKind(args.kind),
        output_image_path=args.out,
        x_range=tuple(args.x_range) if args.x_range else None,
        y_range=tuple(args.y_range) if args.y_range else None,
    )
    try:
        path = render(spec)
    except PlotgenError as exc:
        sys.stderr.write(f"plotgen: {exc}\n")
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
