"""
MomentLab connections module.

This module provides connections with symplectic curvature and the
symplectic form Ω on the space they form.
"""

from momentlab.connections.space import (
    BundleSetup,
    RelativeConnection,
    SymplecticCheck,
    apply_compatible_j,
    compatible_norm,
    contraction_identity_residual,
    curvature,
    d_omega_residual,
    flat_norm,
    is_symplectic,
    omega_pairing,
    pfaffian,
    read_connection,
    require_symplectic,
    standard_j,
    write_connection,
)

__all__ = [
    "BundleSetup",
    "RelativeConnection",
    "SymplecticCheck",
    "apply_compatible_j",
    "compatible_norm",
    "contraction_identity_residual",
    "curvature",
    "d_omega_residual",
    "flat_norm",
    "is_symplectic",
    "omega_pairing",
    "pfaffian",
    "read_connection",
    "require_symplectic",
    "standard_j",
    "write_connection",
]
