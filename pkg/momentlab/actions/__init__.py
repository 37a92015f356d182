"""
MomentLab actions module.

This module provides the bundle automorphism and gauge actions on connections,
their moment maps, and the witnesses built from them.
"""

from momentlab.actions.group import (
    FibreClass,
    GaugeTransformation,
    InvariantField,
    MomentCheck,
    ProbeRecord,
    fibre_class,
    fibre_pairing,
    gauge_act,
    infinitesimal_action,
    moment_identity_residual,
    moment_pairing,
    pair_connection,
    translation_flow,
    volume_density,
)
from momentlab.actions.witnesses import (
    SeparationWitness,
    horizontal_preimage,
    separation_witness,
    tangent_variation,
    theta_pairing,
    theta_pairing_with_primitives,
)

__all__ = [
    "FibreClass",
    "GaugeTransformation",
    "InvariantField",
    "MomentCheck",
    "ProbeRecord",
    "SeparationWitness",
    "fibre_class",
    "fibre_pairing",
    "gauge_act",
    "horizontal_preimage",
    "infinitesimal_action",
    "moment_identity_residual",
    "moment_pairing",
    "pair_connection",
    "separation_witness",
    "tangent_variation",
    "theta_pairing",
    "theta_pairing_with_primitives",
    "translation_flow",
    "volume_density",
]
