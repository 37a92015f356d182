"""
MomentLab Artifact Store - Run artifacts and resumable flow checkpoints.

This module provides the ArtifactStore class, which owns one output
directory and writes every artifact of a run: JSON reports, CSV traces,
field files and flow checkpoints.

All documents are written with sorted keys and ``repr`` float formatting,
so identical runs produce byte-identical files. Wall-clock timings go to
``timings.json`` only.
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from momentlab.forms.calculus import DifferentialForm
from momentlab.forms.fields_io import read_form, write_form

logger = logging.getLogger(__name__)

CHECKPOINT_DIR = "checkpoints"
CHECKPOINT_FILE = "flow.yaml"
CHECKPOINT_FIELD = "flow_phi.f64"
TIMINGS_FILE = "timings.json"


@dataclass
class FlowCheckpoint:
    """
    Resumable position on a flow trajectory.

    The potential itself is stored next to this document as a field file.
    """

    step: int
    t: float
    F: float
    residual: float
    margin: float
    dt: float
    field_file: str = CHECKPOINT_FIELD

    def to_dict(self) -> Dict[str, Any]:
        """Convert checkpoint to a dictionary for serialization."""
        return {
            "step": self.step,
            "t": self.t,
            "F": self.F,
            "residual": self.residual,
            "margin": self.margin,
            "dt": self.dt,
            "field_file": self.field_file,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlowCheckpoint":
        """Create a FlowCheckpoint from a dictionary."""
        return cls(
            step=int(data["step"]),
            t=float(data["t"]),
            F=float(data["F"]),
            residual=float(data["residual"]),
            margin=float(data["margin"]),
            dt=float(data["dt"]),
            field_file=data.get("field_file", CHECKPOINT_FIELD),
        )


class ArtifactStore:
    """
    Writer for a single run directory.

    Example:
        >>> store = ArtifactStore("runs/flow-1")
        >>> store.write_json("report.json", report.to_dict())
        >>> store.write_trace("trace.csv", rows, ["t", "F"])
    """

    def __init__(self, root: Path):
        """
        Initialize the ArtifactStore.

        Args:
            root: Output directory; created if missing.
        """
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._timings: Dict[str, float] = {}

    def path(self, name: str) -> Path:
        return self.root / name

    # ── Documents ─────────────────────────────────────────────────────────

    def write_json(self, name: str, data: Dict[str, Any]) -> Path:
        """Write a JSON document with sorted keys."""
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")
        logger.debug("wrote %s", target)
        return target

    def read_json(self, name: str) -> Optional[Dict[str, Any]]:
        target = self.path(name)
        if not target.exists():
            return None
        return json.loads(target.read_text())

    def write_trace(
        self, name: str, rows: Iterable[Dict[str, Any]], columns: Sequence[str]
    ) -> Path:
        """
        Write a CSV trace with a named header row.

        Args:
            name: File name inside the run directory.
            rows: Mappings holding at least ``columns``.
            columns: Column order.

        Returns:
            Path to the CSV file.
        """
        target = self.path(name)
        with open(target, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([repr(float(row[c])) for c in columns])
        return target

    def read_trace(self, name: str) -> List[Dict[str, float]]:
        """Rows of a CSV trace as floats; empty if the file is missing."""
        target = self.path(name)
        if not target.exists():
            return []
        with open(target, newline="") as f:
            return [{key: float(value) for key, value in row.items()} for row in csv.DictReader(f)]

    def write_field(self, name: str, form: DifferentialForm) -> Path:
        return write_form(form, self.path(name))

    def read_field(self, name: str) -> DifferentialForm:
        return read_form(self.path(name))

    # ── Timings ───────────────────────────────────────────────────────────

    def record_timing(self, name: str, wall_ms: float) -> None:
        self._timings[name] = float(wall_ms)

    def flush_timings(self) -> Path:
        """Write wall-clock measurements; this file is not reproducible."""
        return self.write_json(TIMINGS_FILE, dict(self._timings))

    # ── Checkpoints ───────────────────────────────────────────────────────

    def save_checkpoint(self, checkpoint: FlowCheckpoint, potential: DifferentialForm) -> Path:
        """
        Save a flow checkpoint and its potential.

        Args:
            checkpoint: Position on the trajectory.
            potential: The potential as a 0-form.

        Returns:
            Path to the checkpoint document.
        """
        checkpoint_dir = self.path(CHECKPOINT_DIR)
        checkpoint_dir.mkdir(exist_ok=True)
        write_form(potential, checkpoint_dir / checkpoint.field_file)
        checkpoint_file = checkpoint_dir / CHECKPOINT_FILE
        with open(checkpoint_file, "w") as f:
            yaml.dump(checkpoint.to_dict(), f, default_flow_style=False, sort_keys=True)
        logger.debug("checkpoint at step %d (t=%.6g)", checkpoint.step, checkpoint.t)
        return checkpoint_file

    def load_checkpoint(self) -> Optional[Tuple[FlowCheckpoint, np.ndarray]]:
        """
        Load the latest flow checkpoint.

        Returns:
            (checkpoint, potential values) if one exists, None otherwise.
        """
        checkpoint_file = self.path(CHECKPOINT_DIR) / CHECKPOINT_FILE
        if not checkpoint_file.exists():
            return None
        with open(checkpoint_file) as f:
            data = yaml.safe_load(f)
        checkpoint = FlowCheckpoint.from_dict(data)
        potential = read_form(self.path(CHECKPOINT_DIR) / checkpoint.field_file)
        return checkpoint, potential.values

    def clear_checkpoint(self) -> bool:
        """Remove the checkpoint once a flow has converged."""
        checkpoint_dir = self.path(CHECKPOINT_DIR)
        removed = False
        for name in (CHECKPOINT_FILE, CHECKPOINT_FIELD, CHECKPOINT_FIELD + ".json"):
            target = checkpoint_dir / name
            if target.exists():
                target.unlink()
                removed = True
        if checkpoint_dir.exists() and not any(checkpoint_dir.iterdir()):
            checkpoint_dir.rmdir()
        return removed

    def list_artifacts(self) -> List[str]:
        return sorted(str(p.relative_to(self.root)) for p in self.root.rglob("*") if p.is_file())
