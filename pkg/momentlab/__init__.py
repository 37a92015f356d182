"""
MomentLab - Numerical laboratory for moment maps on spaces of connections.

Spectral exterior calculus on flat tori carries the symplectic structure of
the space of connections with symplectic curvature, the moment maps of the
bundle automorphism and gauge groups, Kähler potentials with their
Kempf-Ness functional and volume flow, and the Weinstein holonomy of
rotation loops lifted to the Hopf bundle.

Architecture:
- Every random draw comes from a seeded PCG64 generator
- Every run writes its artifacts to one output directory
- Reports are byte-identical for identical config and seed
"""

__version__ = "0.1.0"
__license__ = "Apache-2.0"

from momentlab.errors import MomentLabError
from momentlab.forms import DifferentialForm, Grid
from momentlab.workflows import RunReport, run_experiment, verify_suite

__all__ = [
    "DifferentialForm",
    "Grid",
    "MomentLabError",
    "RunReport",
    "run_experiment",
    "verify_suite",
    "__version__",
]
