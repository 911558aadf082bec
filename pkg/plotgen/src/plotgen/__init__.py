"""Key-rate figures from sweep CSV files."""

from .figures import (
    CURVE_STYLES,
    FigureKind,
    FigureSpec,
    PlotgenError,
    load_rows,
    missing_columns,
    render,
    zero_crossing,
)

__version__ = "0.1.0"
