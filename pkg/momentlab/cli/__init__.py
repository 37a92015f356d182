"""
MomentLab CLI module.

This module provides the command-line interface for MomentLab.
"""

from momentlab.cli.main import cli

__all__ = ["cli"]
