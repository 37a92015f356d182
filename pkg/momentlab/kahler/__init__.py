"""
MomentLab Kähler module.

This module provides Kähler potentials, the Kempf-Ness functional and the
volume flow that prescribes the Monge-Ampère density.
"""

from momentlab.kahler.flow import (
    FlowMonitor,
    FlowRecord,
    FlowResult,
    FlowState,
    flow_step,
    initial_state,
    nyquist_eigenvalue,
    run_flow,
    stability_bound,
)
from momentlab.kahler.potentials import (
    KahlerPotential,
    VolumeSpec,
    complex_gauge_act,
    kahler_form,
    kempf_ness,
    kempf_ness_field,
    kn_gradient,
    linear_oracle,
    ma_density,
    path_margin,
    potential_inner_product,
)

__all__ = [
    "FlowMonitor",
    "FlowRecord",
    "FlowResult",
    "FlowState",
    "KahlerPotential",
    "VolumeSpec",
    "complex_gauge_act",
    "flow_step",
    "initial_state",
    "kahler_form",
    "kempf_ness",
    "kempf_ness_field",
    "kn_gradient",
    "linear_oracle",
    "ma_density",
    "nyquist_eigenvalue",
    "path_margin",
    "potential_inner_product",
    "run_flow",
    "stability_bound",
]
