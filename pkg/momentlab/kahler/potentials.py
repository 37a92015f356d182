"""
MomentLab Kähler Potentials - Complexified gauge action and the Kempf-Ness functional.

A potential φ deforms a Kähler form inside its class,

    ω_φ = ω - (1/4π) d(J dφ),

which on T² is ω - (Δφ/4π) dV. Its Monge-Ampère density ρ(φ) is the
coefficient of ω_φⁿ/n!. The Kempf-Ness functional F has differential
dF(φ)ψ = ∫ ψ (ρ(φ) - θ) dV and is convex along affine lines tφ.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from math import factorial, pi
from typing import List, Optional, Tuple, Union

import numpy as np

from momentlab.actions.group import GaugeTransformation
from momentlab.connections.space import RelativeConnection, pfaffian, standard_j
from momentlab.errors import DegreeError, GridMismatchError, KahlerConeError
from momentlab.forms.calculus import DifferentialForm, exterior_derivative, wedge, wedge_power
from momentlab.forms.grid import Grid, inverse_laplacian, laplacian

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-10
FOUR_PI = 4.0 * pi


@dataclass(frozen=True, eq=False)
class VolumeSpec:
    """
    Prescribed volume form θ·dV with ∫θ dV = 1.

    Example:
        >>> VolumeSpec.normalized(grid, 1.0 + 0.3 * np.cos(2 * np.pi * x1))
    """

    grid: Grid
    theta: np.ndarray

    def __post_init__(self) -> None:
        if np.shape(self.theta) != self.grid.shape:
            raise GridMismatchError(
                f"θ has shape {np.shape(self.theta)}, grid is {self.grid.shape}"
            )
        if float(np.min(self.theta)) <= 0.0:
            raise ValueError(f"θ must be positive, min is {float(np.min(self.theta)):.3e}")
        mass = float(np.mean(self.theta))
        if abs(mass - 1.0) > MASS_TOLERANCE:
            raise ValueError(f"θ must integrate to 1, got {mass:.12f}")

    @classmethod
    def normalized(cls, grid: Grid, values: Union[float, np.ndarray]) -> "VolumeSpec":
        field = np.array(np.broadcast_to(np.asarray(values, dtype=float), grid.shape))
        return cls(grid, field / float(np.mean(field)))

    @classmethod
    def flat(cls, grid: Grid) -> "VolumeSpec":
        return cls(grid, grid.ones())


# ── Kähler forms ──────────────────────────────────────────────────────────


def kahler_form(phi: np.ndarray, omega: DifferentialForm) -> DifferentialForm:
    """ω - (1/4π) d(J dφ), the curvature after the complexified action of e^φ."""
    grid = omega.grid
    if grid.half_dim == 1:
        return omega + DifferentialForm.volume(grid, -laplacian(phi, grid) / FOUR_PI)
    d_phi = exterior_derivative(DifferentialForm.scalar(grid, phi))
    return omega - exterior_derivative(standard_j(d_phi)) * (1.0 / FOUR_PI)


def complex_gauge_act(
    phi: np.ndarray,
    connection: RelativeConnection,
    unitary: Optional[GaugeTransformation] = None,
) -> RelativeConnection:
    """
    Action of f = e^φ (times an optional unitary factor) on a connection.

    a ↦ a - (1/4π) J dφ (+ dχ_tot). The result may leave the symplectic set.
    """
    grid = connection.grid
    d_phi = exterior_derivative(DifferentialForm.scalar(grid, phi))
    a = connection.a - standard_j(d_phi) * (1.0 / FOUR_PI)
    if unitary is not None:
        a = a + unitary.phase_differential(grid)
    return RelativeConnection(connection.bundle, a)


def _density(omega: DifferentialForm) -> np.ndarray:
    """Coefficient of ωⁿ/n! against dV."""
    return pfaffian(omega)


def _flat_density(phi: np.ndarray, omega: DifferentialForm) -> np.ndarray:
    """Density of ω - (Δφ/4π) dV on T², without building the form."""
    return _density(omega) - laplacian(phi, omega.grid) / FOUR_PI


def _trace(omega: DifferentialForm, base: DifferentialForm) -> np.ndarray:
    """Coefficient of ω ∧ base^{n-1}/(n-1)!; positive on the Kähler cone."""
    n = omega.grid.half_dim
    return wedge(omega, wedge_power(base, n - 1)).density / factorial(n - 1)


@dataclass(frozen=True, eq=False)
class KahlerPotential:
    """
    Mean-zero potential φ relative to a base Kähler form.

    Attributes:
        phi: Potential values on the grid.
        omega: Base Kähler form (the reference curvature in practice).
    """

    phi: np.ndarray
    omega: DifferentialForm

    @classmethod
    def create(cls, phi: Union[float, np.ndarray], omega: DifferentialForm) -> "KahlerPotential":
        """Normalize ``phi`` to mean zero."""
        field = np.array(np.broadcast_to(np.asarray(phi, dtype=float), omega.grid.shape))
        return cls(field - float(np.mean(field)), omega)

    @classmethod
    def zero(cls, omega: DifferentialForm) -> "KahlerPotential":
        return cls(omega.grid.zeros(), omega)

    @property
    def grid(self) -> Grid:
        return self.omega.grid

    @cached_property
    def form(self) -> DifferentialForm:
        return kahler_form(self.phi, self.omega)

    @cached_property
    def density(self) -> np.ndarray:
        if self.grid.half_dim == 1:
            return _flat_density(self.phi, self.omega)
        return _density(self.form)

    @cached_property
    def margin(self) -> float:
        """Cone margin: min density, and on T⁴ also min trace against the base."""
        margin = float(np.min(self.density))
        if self.grid.half_dim > 1:
            margin = min(margin, float(np.min(_trace(self.form, self.omega))))
        return margin

    def in_cone(self) -> bool:
        return self.margin > 0.0


def ma_density(potential: KahlerPotential) -> np.ndarray:
    """
    Monge-Ampère density ρ(φ) of ω_φⁿ/n!.

    Raises:
        KahlerConeError: if φ has left the Kähler cone.
    """
    if not potential.in_cone():
        raise KahlerConeError(
            f"potential left the Kähler cone (margin {potential.margin:.3e})", potential.margin
        )
    return potential.density


def _path_samples(
    phi: np.ndarray, omega: DifferentialForm, endpoint: Optional[KahlerPotential] = None
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """
    Densities of ω_{tφ} at t = 0, 1 (T²) or t = 0, 1/2, 1 (T⁴).

    On T⁴ the traces at both ends come back as well; on T² that list is empty.
    """
    end = endpoint if endpoint is not None else KahlerPotential(phi, omega)
    base = _density(omega)
    if omega.grid.half_dim == 1:
        return [base, end.density], []
    half = _density(kahler_form(0.5 * phi, omega))
    return [base, half, end.density], [_trace(omega, omega), _trace(end.form, omega)]


def _margin_along(densities: List[np.ndarray], traces: List[np.ndarray]) -> float:
    margin = min(float(np.min(rho)) for rho in densities)
    if len(densities) == 2:
        return margin
    rho_0, rho_h, rho_1 = densities
    c2 = 2.0 * (rho_1 - 2.0 * rho_h + rho_0)
    c1 = rho_1 - rho_0 - c2
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = np.where(c2 > 0.0, -c1 / (2.0 * c2), -1.0)
        inside = (vertex > 0.0) & (vertex < 1.0)
        interior = np.where(inside, rho_0 - c1 * c1 / (4.0 * c2), np.inf)
    margin = min(margin, float(np.min(interior)))
    return min(margin, *(float(np.min(tr)) for tr in traces))


def path_margin(phi: np.ndarray, omega: DifferentialForm) -> float:
    """
    Minimum cone margin along the affine path tφ, t in [0, 1].

    The density along the path is a degree-n polynomial in t and the trace
    is affine, so the minimum is found exactly from n+1 samples.
    """
    return _margin_along(*_path_samples(phi, omega))


# ── Kempf-Ness functional ─────────────────────────────────────────────────


def potential_inner_product(f: np.ndarray, g: np.ndarray, theta: VolumeSpec) -> float:
    """⟨f, g⟩ = ∫ f g θ dV."""
    return float(np.mean(f * g * theta.theta))


def kempf_ness_field(
    phi: np.ndarray,
    omega: DifferentialForm,
    theta: VolumeSpec,
    endpoint: Optional[KahlerPotential] = None,
) -> float:
    """
    F(φ) = ∫₀¹ ∫ φ (ρ(tφ) - θ) dV dt for a potential that need not be normalized.

    The t-integrand is a polynomial of degree n, integrated exactly by the
    trapezoid rule (T²) or Simpson's rule (T⁴). ``endpoint`` reuses the
    densities already cached on the potential of φ itself.

    Raises:
        KahlerConeError: if the path tφ leaves the cone.
    """
    densities, traces = _path_samples(phi, omega, endpoint)
    margin = _margin_along(densities, traces)
    if margin <= 0.0:
        raise KahlerConeError(f"affine path leaves the Kähler cone (margin {margin:.3e})", margin)
    slopes = [float(np.mean(phi * (rho - theta.theta))) for rho in densities]
    if omega.grid.half_dim == 1:
        return 0.5 * (slopes[0] + slopes[1])
    return (slopes[0] + 4.0 * slopes[1] + slopes[2]) / 6.0


def kempf_ness(potential: KahlerPotential, theta: VolumeSpec) -> float:
    """Kempf-Ness functional F of a normalized potential."""
    return kempf_ness_field(potential.phi, potential.omega, theta, endpoint=potential)


def kn_gradient(potential: KahlerPotential, theta: VolumeSpec) -> np.ndarray:
    """L²(θ)-gradient of F: ρ(φ)/θ - 1."""
    return ma_density(potential) / theta.theta - 1.0


def linear_oracle(theta: VolumeSpec, omega: DifferentialForm) -> KahlerPotential:
    """
    Exact solution of ρ(φ) = θ on T², where the equation is linear.

    Solves Δφ = 4π(ρ(0) - θ) spectrally.

    Raises:
        DegreeError: on T⁴.
        KahlerConeError: if θ is too far from flat for the discrete solution to stay in the cone.
    """
    if omega.grid.half_dim != 1:
        raise DegreeError("linear oracle is only available on T²")
    source = FOUR_PI * (_density(omega) - theta.theta)
    potential = KahlerPotential.create(inverse_laplacian(source, omega.grid), omega)
    if not potential.in_cone():
        raise KahlerConeError(
            f"θ too far from flat for the T² cone (margin {potential.margin:.3e})", potential.margin
        )
    return potential
