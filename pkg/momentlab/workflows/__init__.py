"""
MomentLab workflows module.

This module provides the check engine, the verification suite and the
experiment dispatcher behind the command line.
"""

from momentlab.workflows.engine import CheckRecord, CheckRunner, CheckStatus, Measurement, RunReport
from momentlab.workflows.experiments import build_theta, run_experiment
from momentlab.workflows.suite import verify_suite

__all__ = [
    "CheckRecord",
    "CheckRunner",
    "CheckStatus",
    "Measurement",
    "RunReport",
    "build_theta",
    "run_experiment",
    "verify_suite",
]
