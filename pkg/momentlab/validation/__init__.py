"""
MomentLab validation module.

This module provides experiment configuration validation and schema enforcement.
"""

from momentlab.errors import ConfigError
from momentlab.validation.config import Config, ExperimentConfig, thread_count

__all__ = ["Config", "ConfigError", "ExperimentConfig", "thread_count"]
