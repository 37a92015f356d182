"""
MomentLab report module.

This module provides SVG line charts of run traces.
"""

from momentlab.report.svg import emit_plot, line_chart_svg, read_columns

__all__ = ["emit_plot", "line_chart_svg", "read_columns"]
