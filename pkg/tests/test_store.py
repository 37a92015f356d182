"""Tests for the artifact store."""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from momentlab.forms import DifferentialForm, Grid
from momentlab.state.store import ArtifactStore, FlowCheckpoint


@pytest.fixture
def temp_dir():
    """Create a temporary run directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir) / "run"


class TestFlowCheckpoint:
    """Tests for FlowCheckpoint."""

    def test_dict_round_trip(self):
        """Test to_dict and from_dict."""
        checkpoint = FlowCheckpoint(step=12, t=0.12, F=-1e-3, residual=0.2, margin=0.9, dt=0.01)
        assert FlowCheckpoint.from_dict(checkpoint.to_dict()) == checkpoint

    def test_default_field_file(self):
        """Test that older documents without field_file load."""
        data = {"step": 1, "t": 0.1, "F": 0.0, "residual": 1.0, "margin": 1.0, "dt": 0.1}
        assert FlowCheckpoint.from_dict(data).field_file == "flow_phi.f64"


class TestArtifactStore:
    """Tests for ArtifactStore."""

    def test_creates_root(self, temp_dir):
        """Test that the run directory is created."""
        ArtifactStore(temp_dir)
        assert temp_dir.is_dir()

    def test_json_sorted_keys(self, temp_dir):
        """Test that JSON documents are written with sorted keys."""
        store = ArtifactStore(temp_dir)
        path = store.write_json("report.json", {"b": 1, "a": {"d": 2, "c": 3}})
        text = path.read_text()
        assert text.index('"a"') < text.index('"b"')
        assert text.index('"c"') < text.index('"d"')
        assert store.read_json("report.json") == {"a": {"c": 3, "d": 2}, "b": 1}

    def test_read_missing_json(self, temp_dir):
        """Test that a missing document reads as None."""
        assert ArtifactStore(temp_dir).read_json("nothing.json") is None

    def test_trace(self, temp_dir):
        """Test writing and reading a CSV trace."""
        store = ArtifactStore(temp_dir)
        rows = [{"t": 0.0, "F": 0.0, "extra": 5}, {"t": 0.1, "F": -1.0 / 3.0, "extra": 6}]
        path = store.write_trace("trace.csv", rows, ["t", "F"])
        assert path.read_text().splitlines()[0] == "t,F"
        loaded = store.read_trace("trace.csv")
        assert loaded == [{"t": 0.0, "F": 0.0}, {"t": 0.1, "F": -1.0 / 3.0}]

    def test_missing_trace(self, temp_dir):
        """Test that a missing trace reads as empty."""
        assert ArtifactStore(temp_dir).read_trace("trace.csv") == []

    def test_field(self, temp_dir):
        """Test writing and reading a field file."""
        store = ArtifactStore(temp_dir)
        grid = Grid(1, 8)
        form = DifferentialForm.volume(grid, grid.coordinates()[0])
        store.write_field("theta.f64", form)
        assert (store.read_field("theta.f64") - form).norm_inf() == 0.0

    def test_timings(self, temp_dir):
        """Test that timings are written to their own file."""
        store = ArtifactStore(temp_dir)
        store.record_timing("t2.forms.dd_zero", 1.25)
        store.flush_timings()
        assert store.read_json("timings.json") == {"t2.forms.dd_zero": 1.25}

    def test_checkpoint_cycle(self, temp_dir):
        """Test save, load and clear of a flow checkpoint."""
        store = ArtifactStore(temp_dir)
        grid = Grid(1, 8)
        phi = 0.01 * np.cos(2 * np.pi * grid.coordinates()[0])
        checkpoint = FlowCheckpoint(step=30, t=0.3, F=-2e-4, residual=0.05, margin=0.97, dt=0.01)

        assert store.load_checkpoint() is None
        store.save_checkpoint(checkpoint, DifferentialForm.scalar(grid, phi))
        loaded, values = store.load_checkpoint()
        assert loaded == checkpoint
        assert np.array_equal(values, phi)

        assert store.clear_checkpoint()
        assert store.load_checkpoint() is None
        assert not (temp_dir / "checkpoints").exists()
        assert not store.clear_checkpoint()

    def test_list_artifacts(self, temp_dir):
        """Test the sorted list of run files."""
        store = ArtifactStore(temp_dir)
        store.write_json("report.json", {})
        store.write_json("sub/probes.json", {})
        assert store.list_artifacts() == ["report.json", "sub/probes.json"]
