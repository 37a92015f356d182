"""
MomentLab Witnesses - Horizontal preimages, separation witnesses and the Θ pairing.
"""

import logging
from math import factorial
from typing import NamedTuple

import numpy as np

from momentlab.actions.group import InvariantField, moment_pairing
from momentlab.connections.space import RelativeConnection, require_symplectic
from momentlab.errors import (
    DegreeError,
    IdenticalConnectionsError,
    SingularSystemError,
    TangencyError,
)
from momentlab.forms.calculus import (
    DifferentialForm,
    VectorField,
    contract,
    exterior_derivative,
    hodge_primitive,
    integrate,
    metric_dual,
    pairing,
    two_form_matrix,
    wedge,
    wedge_power,
)

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-8
TANGENCY_TOLERANCE = 1e-8


class SeparationWitness(NamedTuple):
    field: InvariantField
    gap: float


def horizontal_preimage(connection: RelativeConnection, a: DifferentialForm) -> InvariantField:
    """
    A-horizontal field η with ρ_A(η) = a.

    Solves ι_v ω_A = a pointwise (ι_v ω has coefficients Wᵀv) and sets
    g = -a_A(v), so A(η) = 0.

    Raises:
        SingularSystemError: if some pointwise system cannot be solved.
    """
    omega = require_symplectic(connection)
    system = np.swapaxes(two_form_matrix(omega), -1, -2)
    try:
        solved = np.linalg.solve(system, a.coefficients()[..., None])[..., 0]
    except np.linalg.LinAlgError as e:
        raise SingularSystemError(f"pointwise ω_A system is singular: {e}") from e
    v = VectorField(a.grid, tuple(np.ascontiguousarray(solved[..., i]) for i in range(a.grid.dim)))
    return InvariantField(v, -pairing(connection.a, v))


def separation_witness(
    connection: RelativeConnection, other: RelativeConnection
) -> SeparationWitness:
    """
    Lie-algebra element separating the moment images of two connections.

    With δ = a - a′ and η the A′-horizontal lift of δ♯, ⟨μ(A′), η⟩ = 0 while
    ⟨μ(A), η⟩ = 1/n! ∫ |δ|² ω_Aⁿ > 0.

    Raises:
        IdenticalConnectionsError: if a = a′ on the grid.
    """
    delta = connection.a - other.a
    size = delta.norm_inf()
    if size <= IDENTITY_TOLERANCE:
        raise IdenticalConnectionsError(f"identical connections (|a - a′| = {size:.3e})")
    v = metric_dual(delta)
    eta = InvariantField(v, -pairing(other.a, v))
    gap = moment_pairing(connection, eta)
    logger.debug("separation witness gap=%.6e for |δ|=%.3e", gap, size)
    return SeparationWitness(eta, gap)


# ── Θ pairing on the fixed-volume space ───────────────────────────────────


def tangent_variation(omega: DifferentialForm, u: VectorField) -> DifferentialForm:
    """γ_u = d(ι_u ω); tangent to the fixed-volume space when u preserves ωⁿ."""
    return exterior_derivative(contract(u, omega))


def _check_tangent(omega: DifferentialForm, gamma: DifferentialForm, name: str) -> None:
    n = omega.grid.half_dim
    residual = wedge(gamma, wedge_power(omega, n - 1)).norm_inf()
    if residual > TANGENCY_TOLERANCE:
        raise TangencyError(f"{name} ∧ ω^{n - 1} = {residual:.3e}, not tangent", residual)


def theta_pairing_with_primitives(
    omega: DifferentialForm, a: DifferentialForm, a_prime: DifferentialForm
) -> float:
    """1/(n-1)! ∫ a ∧ a′ ∧ ω^{n-1} for explicit primitives."""
    n = omega.grid.half_dim
    return integrate(wedge(wedge(a, a_prime), wedge_power(omega, n - 1))) / factorial(n - 1)


def theta_pairing(
    omega: DifferentialForm, gamma: DifferentialForm, gamma_prime: DifferentialForm
) -> float:
    """
    Θ(γ, γ′) on exact variations tangent to the fixed-volume space.

    Uses the minimal-norm primitives from hodge_primitive.

    Raises:
        DegreeError: on T², where the pairing is not defined.
        NotExactError: if γ or γ′ is not exact.
        TangencyError: if γ ∧ ω or γ′ ∧ ω does not vanish.
    """
    if omega.grid.half_dim < 2:
        raise DegreeError("theta pairing needs T⁴")
    _check_tangent(omega, gamma, "γ")
    _check_tangent(omega, gamma_prime, "γ′")
    return theta_pairing_with_primitives(
        omega, hodge_primitive(gamma), hodge_primitive(gamma_prime)
    )
