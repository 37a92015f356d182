"""Tests for SVG trace plots."""

import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from momentlab.errors import ConfigError, PlotError
from momentlab.report.svg import emit_plot, line_chart_svg, read_columns


@pytest.fixture
def temp_dir():
    """Create a temporary directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def trace(temp_dir):
    """Small flow-like trace."""
    path = temp_dir / "trace.csv"
    path.write_text("step,t,F,residual_linf\n0,0.0,0.0,0.4\n1,0.1,-0.01,0.1\n2,0.2,-0.012,0.0\n")
    return path


class TestReadColumns:
    """Tests for read_columns."""

    def test_reads_floats(self, trace):
        """Test that the requested columns are read as floats."""
        data = read_columns(trace, ["t", "F"])
        assert data == {"t": [0.0, 0.1, 0.2], "F": [0.0, -0.01, -0.012]}

    def test_missing_column(self, trace):
        """Test that a missing column lists the available ones."""
        with pytest.raises(PlotError) as excinfo:
            read_columns(trace, ["t", "energy"])
        assert excinfo.value.available == ["step", "t", "F", "residual_linf"]

    def test_empty_file(self, temp_dir):
        """Test that an empty file is rejected."""
        path = temp_dir / "empty.csv"
        path.write_text("")
        with pytest.raises(PlotError):
            read_columns(path, ["t", "F"])

    def test_header_only(self, temp_dir):
        """Test that a header without rows is rejected."""
        path = temp_dir / "header.csv"
        path.write_text("t,F\n")
        with pytest.raises(PlotError):
            read_columns(path, ["t", "F"])

    def test_non_numeric_cell(self, temp_dir):
        """Test that a non-numeric cell names its line and column."""
        path = temp_dir / "bad.csv"
        path.write_text("t,F\n0,1.0\n1,oops\n")
        with pytest.raises(PlotError) as excinfo:
            read_columns(path, ["t", "F"])
        assert "line 3" in str(excinfo.value)
        assert "column F" in str(excinfo.value)
        assert excinfo.value.available == ["t", "F"]

    def test_short_row(self, temp_dir):
        """Test that a row missing a cell is rejected."""
        path = temp_dir / "short.csv"
        path.write_text("t,F\n0,1.0\n1\n")
        with pytest.raises(PlotError):
            read_columns(path, ["t", "F"])


class TestEmitPlot:
    """Tests for emit_plot and line_chart_svg."""

    def test_writes_svg(self, trace, temp_dir):
        """Test a linear-scale chart with two series."""
        path = emit_plot(trace, ["t", "F", "residual_linf"], temp_dir / "plots" / "flow.svg")
        svg = path.read_text()
        assert svg.startswith("<svg")
        assert svg.count("<polyline") == 2
        assert "F, residual_linf vs t" in svg

    def test_log_scale_drops_zeros(self, trace, temp_dir):
        """Test that non-positive values are dropped on a log axis."""
        svg = emit_plot(trace, ["t", "residual_linf"], temp_dir / "r.svg", log_y=True).read_text()
        assert "(log10)" in svg
        polyline = next(line for line in svg.splitlines() if line.startswith("<polyline"))
        assert len(polyline.split('points="')[1].split('"')[0].split()) == 2

    def test_log_scale_needs_positive_values(self, trace, temp_dir):
        """Test that a log axis needs at least one positive value."""
        with pytest.raises(PlotError):
            emit_plot(trace, ["t", "F"], temp_dir / "f.svg", log_y=True)

    def test_needs_two_columns(self, trace, temp_dir):
        """Test that an x column alone is rejected."""
        with pytest.raises(PlotError):
            emit_plot(trace, ["t"], temp_dir / "t.svg")

    def test_plot_error_is_usage_error(self):
        """Test that plot errors are configuration errors."""
        assert issubclass(PlotError, ConfigError)

    def test_constant_series(self):
        """Test that a flat series still renders."""
        svg = line_chart_svg([0.0, 1.0], {"F": [2.0, 2.0]}, "t")
        assert "<polyline" in svg

    def test_markup_in_names_is_escaped(self, temp_dir):
        """Test that column names with markup characters still give well-formed SVG."""
        path = temp_dir / "markup.csv"
        path.write_text("x&y,a<b\n0,1.0\n1,2.0\n")
        svg = emit_plot(path, ["x&y", "a<b"], temp_dir / "markup.svg").read_text()
        root = ET.fromstring(svg)
        texts = [element.text for element in root.iter("{http://www.w3.org/2000/svg}text")]
        assert "a<b vs x&y" in texts
        assert "x&y" in texts
        assert "a<b" in texts
