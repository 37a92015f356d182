"""
MomentLab Plots - Line charts of trace CSV files as plain SVG.

emit_plot is a pure file-to-file transform: it reads a CSV with a named
header row and writes one SVG line chart, optionally with a logarithmic
y axis for residual columns.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union
from xml.sax.saxutils import escape

from momentlab.errors import PlotError

logger = logging.getLogger(__name__)

# ── Colour palette per series ─────────────────────────────────────────────

SERIES_COLOURS: List[str] = ["#6C63FF", "#D97706", "#0EA5E9", "#DC2626", "#10B981", "#7C3AED"]

WIDTH = 640
HEIGHT = 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 30, 50, 60
TICKS = 5


def read_columns(path: Union[str, Path], columns: Sequence[str]) -> Dict[str, List[float]]:
    """
    Read the named columns of a CSV trace.

    Raises:
        PlotError: if the file has no header or no rows, a column is missing, or a
            cell is not a number.
    """
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        available = list(reader.fieldnames or [])
        if not available:
            raise PlotError(f"{path} is empty")
        missing = [c for c in columns if c not in available]
        if missing:
            raise PlotError(
                f"columns {', '.join(missing)} not in {path}; available: {', '.join(available)}",
                available,
            )
        data: Dict[str, List[float]] = {c: [] for c in columns}
        for row in reader:
            for c in columns:
                try:
                    data[c].append(float(row[c]))
                except (TypeError, ValueError):
                    raise PlotError(
                        f"{path} line {reader.line_num}: column {c} has "
                        f"non-numeric value {row[c]!r}",
                        available,
                    ) from None
    if not data[columns[0]]:
        raise PlotError(f"{path} has a header but no rows", available)
    return data


def _bounds(values: List[float]) -> Tuple[float, float]:
    low, high = min(values), max(values)
    if low == high:
        pad = abs(low) * 0.05 or 1.0
        return low - pad, high + pad
    return low, high


def _tick_label(value: float, log_y: bool) -> str:
    if log_y:
        return f"1e{value:.0f}" if float(value).is_integer() else f"{10.0 ** value:.1e}"
    return f"{value:.3g}"


def line_chart_svg(
    x: List[float],
    series: Dict[str, List[float]],
    x_label: str,
    log_y: bool = False,
    title: str = "",
) -> str:
    """
    Render one or more series against a shared x axis.

    With ``log_y`` the y values are plotted as log10; non-positive points are
    dropped.

    Raises:
        PlotError: if a log-scale series has no positive values.
    """
    chart_w = WIDTH - MARGIN_L - MARGIN_R
    chart_h = HEIGHT - MARGIN_T - MARGIN_B

    points: Dict[str, List[Tuple[float, float]]] = {}
    for name, values in series.items():
        pairs = [(xi, yi) for xi, yi in zip(x, values) if math.isfinite(yi)]
        if log_y:
            pairs = [(xi, math.log10(yi)) for xi, yi in pairs if yi > 0.0]
            if not pairs:
                raise PlotError(f"column {name} has no positive values for a log scale")
        points[name] = pairs

    x_min, x_max = _bounds(x)
    y_min, y_max = _bounds([y for pairs in points.values() for _, y in pairs] or [0.0])
    if log_y:
        y_min, y_max = math.floor(y_min), math.ceil(y_max)
        if y_min == y_max:
            y_max += 1

    def sx(value: float) -> float:
        return MARGIN_L + (value - x_min) / (x_max - x_min) * chart_w

    def sy(value: float) -> float:
        return MARGIN_T + chart_h - (value - y_min) / (y_max - y_min) * chart_h

    heading = title or ", ".join(series) + f" vs {x_label}"
    lines: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" '
        'style="font-family:system-ui,sans-serif;background:#fff">',
        f'<text x="{WIDTH / 2:.0f}" y="28" text-anchor="middle" font-size="15" '
        f'font-weight="bold" fill="#1a1a2e">{escape(heading)}</text>',
    ]

    # Y axis grid
    for k in range(TICKS + 1):
        value = y_min + (y_max - y_min) * k / TICKS
        y = sy(value)
        lines.append(
            f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{WIDTH - MARGIN_R}" y2="{y:.1f}" '
            f'stroke="#e2e8f0" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11" '
            f'fill="#94a3b8">{_tick_label(value, log_y)}</text>'
        )
    for k in range(TICKS + 1):
        value = x_min + (x_max - x_min) * k / TICKS
        lines.append(
            f'<text x="{sx(value):.1f}" y="{MARGIN_T + chart_h + 18}" text-anchor="middle" '
            f'font-size="11" fill="#94a3b8">{value:.3g}</text>'
        )
    lines.append(
        f'<text x="{MARGIN_L + chart_w / 2:.0f}" y="{HEIGHT - 16}" text-anchor="middle" '
        f'font-size="12" fill="#475569">{escape(x_label)}</text>'
    )

    for i, (name, pairs) in enumerate(points.items()):
        colour = SERIES_COLOURS[i % len(SERIES_COLOURS)]
        path = " ".join(f"{sx(px):.2f},{sy(py):.2f}" for px, py in pairs)
        lines.append(
            f'<polyline points="{path}" fill="none" stroke="{colour}" stroke-width="1.5"/>'
        )
        # Legend
        lines.append(
            f'<text x="{WIDTH - MARGIN_R - 4}" y="{MARGIN_T + 14 + 16 * i}" text-anchor="end" '
            f'font-size="12" fill="{colour}">{escape(name)}{" (log10)" if log_y else ""}</text>'
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_plot(
    trace_csv_path: Union[str, Path],
    columns: Sequence[str],
    output_svg_path: Union[str, Path],
    log_y: bool = False,
) -> Path:
    """
    Plot ``columns[1:]`` against ``columns[0]`` from a trace CSV.

    Args:
        trace_csv_path: CSV with a named header row.
        columns: x column followed by one or more y columns.
        output_svg_path: Destination SVG file.
        log_y: Logarithmic y axis.

    Returns:
        Path to the SVG file.

    Raises:
        PlotError: for missing columns, an empty CSV, non-numeric cells, or fewer
            than two columns.

    Example:
        >>> emit_plot("run/trace.csv", ["t", "residual_linf"], "run/residual.svg", log_y=True)
    """
    if len(columns) < 2:
        raise PlotError("need an x column and at least one y column")
    data = read_columns(trace_csv_path, columns)
    x_label, y_columns = columns[0], list(columns[1:])
    svg = line_chart_svg(data[x_label], {c: data[c] for c in y_columns}, x_label, log_y=log_y)
    target = Path(output_svg_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(svg)
    logger.debug("wrote %s (%d points)", target, len(data[x_label]))
    return target
