"""CSV and minimal-SVG report writers used by the command-line pipeline.

All numbers are written with shortest-roundtrip float formatting so reruns
with identical inputs produce byte-identical files; NaN is written as NA.
The one exception is the growth-coefficient table, which mirrors a compact
fixed format (two decimals for M1, one-significant-digit scientific for
M2-M4) alongside a full-precision p-value companion file.
"""

from __future__ import annotations

import csv
import math

_COLORS = {"white": "#ffffff", "yellow": "#f2d21f", "red": "#d62728"}


def fmt(value) -> str:
    """Deterministic cell formatting; floats via repr, NaN as NA."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "NA"
        return repr(value)
    if value is None:
        return "NA"
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def write_plot_series(path, series) -> None:
    """Serialize a PlotSeries as ``x,y,series`` rows.

    Data points get series label "points".  A (intercept, slope) reference
    line is written as its two endpoint rows labelled "reference"; a curve
    reference is written point by point.
    """
    rows = [[x, y, "points"] for x, y in series.points]
    ref = series.reference
    if len(ref) == 2 and all(isinstance(v, float) for v in ref):
        intercept, slope = ref
        xs = [series.points[0][0], series.points[-1][0]]
        rows += [[x, intercept + slope * x, "reference"] for x in xs]
    else:
        rows += [[x, y, "reference"] for x, y in ref]
    write_csv(path, ["x", "y", "series"], rows)


def p_value_color(p: float) -> str:
    """white: p > 0.05, yellow: 0.01 <= p <= 0.05, red: p < 0.01."""
    if p < 0.01:
        return "red"
    if p < 0.05:
        return "yellow"
    return "white"


def beta_cell(method: str, beta: float) -> str:
    """Growth-table format: 2 decimals for M1, 1-digit scientific otherwise."""
    if isinstance(beta, float) and math.isnan(beta):
        return "NA"
    if method == "M1":
        return "%.2f" % beta
    return "%.0e" % beta


def svg_heatmap(path, row_labels, col_labels, colors, cell: int = 14,
                left: int = 46, top: int = 18) -> None:
    """Write a p-value classification grid as a standalone SVG.

    colors[i][j] must be one of white/yellow/red for row i, column j.
    """
    width = left + cell * len(col_labels) + 8
    height = top + cell * len(row_labels) + 30
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="#fafafa"/>',
    ]
    for i, row in enumerate(row_labels):
        y = top + i * cell
        parts.append(f'<text x="{left - 4}" y="{y + cell - 4}" font-size="9" '
                     f'text-anchor="end" font-family="monospace">{row}</text>')
        for j, _ in enumerate(col_labels):
            x = left + j * cell
            fill = _COLORS[colors[i][j]]
            parts.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                         f'fill="{fill}" stroke="#999" stroke-width="0.5"/>')
    for j, col in enumerate(col_labels):
        if j % 5 == 0 or j == len(col_labels) - 1:
            x = left + j * cell + cell // 2
            y = top + cell * len(row_labels) + 12
            parts.append(f'<text x="{x}" y="{y}" font-size="8" text-anchor="middle" '
                         f'font-family="monospace">{col}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
