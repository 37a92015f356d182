"""
MomentLab state management module.

This module provides run artifacts and checkpoints for resumable flows.
"""

from momentlab.state.store import ArtifactStore, FlowCheckpoint

__all__ = ["ArtifactStore", "FlowCheckpoint"]
