"""
MomentLab holonomy module.

This module provides the Hopf bundle over S² and the holonomy of lifted
Hamiltonian loops.
"""

from momentlab.holonomy.hopf import (
    RotationHamiltonian,
    hamiltonian_residual,
    hopf_connection,
    hopf_projection,
    lift_generator,
    plaquette_residual,
    rotation_hamiltonian,
    vertical_generator,
)
from momentlab.holonomy.weinstein import (
    HolonomyResult,
    LoopSegment,
    LoopSpec,
    loop_holonomy,
    transport,
    weinstein_hom,
)

__all__ = [
    "HolonomyResult",
    "LoopSegment",
    "LoopSpec",
    "RotationHamiltonian",
    "hamiltonian_residual",
    "hopf_connection",
    "hopf_projection",
    "lift_generator",
    "loop_holonomy",
    "plaquette_residual",
    "rotation_hamiltonian",
    "transport",
    "vertical_generator",
    "weinstein_hom",
]
