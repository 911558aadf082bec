"""Render key-rate-vs-distance figures from sweep CSV files.

Input is the fixed sweep schema produced by the analysis CLI; this module
only reads values (plus locating sign changes in the given rows) — it
never recomputes rates. Two figure kinds are supported: the four-curve
amplifier-attack comparison and the three-curve attenuator-attack figure
with the insecure region shaded between the attacked and trusted
zero crossings.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Stable ids inside SVG output so identical input gives identical bytes.
plt.rcParams["svg.hashsalt"] = "plotgen"


class FigureKind(str, Enum):
    FIG3 = "fig3"
    FIG5 = "fig5"


class PlotgenError(Exception):
    pass


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str | Path
    figure_kind: FigureKind
    output_image_path: str | Path
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None


# One fixed style table; keys are CSV column suffixes.
CURVE_STYLES = {
    "conv": {"color": "green", "linestyle": "--", "label": "conventional model"},
    "tr": {"color": "tab:blue", "linestyle": "-.", "label": "trusted model"},
    "pia": {"color": "red", "linestyle": "-", "label": "amplifier attack (g=2)"},
    "pia2": {"color": "black", "linestyle": ":", "label": "amplifier attack (g=10)"},
    "voa": {"color": "red", "linestyle": "-", "label": "attenuator attack (r=1/T)"},
}

REQUIRED_COLUMNS = {
    FigureKind.FIG3: ["distance_km", "K_conv", "K_tr", "K_pia", "K_pia2"],
    FigureKind.FIG5: ["distance_km", "K_conv", "K_tr", "K_voa"],
}

INSECURE_FILL = {"color": "bisque", "alpha": 0.8}


def load_rows(csv_path: str | Path) -> tuple[list[str], list[dict[str, float | None]]]:
    """Read a sweep CSV into (header, rows); empty cells become None."""
    path = Path(csv_path)
    if not path.exists():
        raise PlotgenError(f"CSV not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotgenError(f"CSV is empty: {path}") from None
        rows = []
        for raw in reader:
            row: dict[str, float | None] = {}
            for name, cell in zip(header, raw):
                row[name] = float(cell) if cell != "" else None
            rows.append(row)
    if not rows:
        raise PlotgenError(f"CSV has a header but no data rows: {path}")
    return header, rows


def missing_columns(header: list[str], kind: FigureKind) -> list[str]:
    return [c for c in REQUIRED_COLUMNS[kind] if c not in header]


def zero_crossing(rows: list[dict[str, float | None]], column: str) -> float | None:
    """Distance where the column's value crosses zero, interpolated.

    Returns None when the column has no positive values or never crosses
    within the data range.
    """
    prev_d: float | None = None
    prev_k: float | None = None
    for row in rows:
        d, k = row["distance_km"], row[column]
        if d is None or k is None:
            continue
        if prev_k is not None and prev_k > 0 and k <= 0:
            # linear interpolation between the bracketing samples
            return prev_d + (d - prev_d) * prev_k / (prev_k - k)
        prev_d, prev_k = d, k
    return None


def _positive_series(
    rows: list[dict[str, float | None]], column: str
) -> tuple[list[float], list[float]]:
    xs, ys = [], []
    for row in rows:
        d, k = row["distance_km"], row[column]
        if d is not None and k is not None and k > 0:
            xs.append(d)
            ys.append(k)
    return xs, ys


def render(spec: FigureSpec) -> str:
    """Render the figure and return the written image path."""
    header, rows = load_rows(spec.csv_path)
    missing = missing_columns(header, spec.figure_kind)
    if missing:
        raise PlotgenError(
            f"CSV {spec.csv_path} lacks columns required for "
            f"{spec.figure_kind.value}: {', '.join(missing)}"
        )
    if spec.figure_kind is FigureKind.FIG3:
        curve_keys = ["conv", "tr", "pia", "pia2"]
        shade = False
    else:
        curve_keys = ["conv", "tr", "voa"]
        shade = True

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    crossings: dict[str, float | None] = {}
    for key in curve_keys:
        column = f"K_{key}"
        xs, ys = _positive_series(rows, column)
        style = CURVE_STYLES[key]
        if xs:
            ax.plot(xs, ys, linewidth=1.6, **style)
        else:
            warnings.warn(
                f"column {column} has no positive key rates; curve omitted",
                stacklevel=2,
            )
        crossings[key] = zero_crossing(rows, column)

    for key, crossing in crossings.items():
        if crossing is not None:
            ax.axvline(
                crossing, color=CURVE_STYLES[key]["color"], linestyle=":",
                linewidth=0.8, alpha=0.6,
            )

    if shade:
        attacked, trusted = crossings.get("voa"), crossings.get("tr")
        if attacked is not None and trusted is not None and attacked < trusted:
            ax.axvspan(attacked, trusted, **INSECURE_FILL, label="insecure region")
        else:
            warnings.warn(
                "could not locate both zero crossings in the data range; "
                "figure rendered without the insecure-region shading",
                stacklevel=2,
            )

    ax.set_yscale("log")
    ax.set_xlabel("distance (km)")
    ax.set_ylabel("secret key rate (bits per channel use)")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(loc="lower left", frameon=False)
    if spec.x_range is not None:
        ax.set_xlim(*spec.x_range)
    if spec.y_range is not None:
        ax.set_ylim(*spec.y_range)

    out = Path(spec.output_image_path)
    if out.suffix.lower() not in (".svg", ".png"):
        raise PlotgenError(f"output must be .svg or .png, got {out.suffix!r}")
    # Date metadata suppressed so identical inputs give identical bytes.
    fig.savefig(out, metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    return str(out)
