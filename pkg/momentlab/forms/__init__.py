"""
MomentLab forms module.

This module provides spectral exterior calculus on flat tori and field files.
"""

from momentlab.forms.calculus import (
    DifferentialForm,
    VectorField,
    codifferential,
    contract,
    exterior_derivative,
    harmonic_part,
    hodge_primitive,
    integrate,
    metric_dual,
    multi_indices,
    pairing,
    pullback_translation,
    two_form_matrix,
    wedge,
    wedge_power,
)
from momentlab.forms.fields_io import export_csv, read_form, write_form
from momentlab.forms.grid import Grid, inverse_laplacian, laplacian, spectral_derivative

__all__ = [
    "DifferentialForm",
    "Grid",
    "VectorField",
    "codifferential",
    "contract",
    "export_csv",
    "exterior_derivative",
    "harmonic_part",
    "hodge_primitive",
    "integrate",
    "inverse_laplacian",
    "laplacian",
    "metric_dual",
    "multi_indices",
    "pairing",
    "pullback_translation",
    "read_form",
    "spectral_derivative",
    "two_form_matrix",
    "wedge",
    "wedge_power",
    "write_form",
]
