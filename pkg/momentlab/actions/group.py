"""
MomentLab Group Actions - Bundle automorphisms, gauge transformations and moment maps.

An element η of the Lie algebra of bundle automorphisms is represented by
its pushforward v to the base together with g = A_ref(η). For any
A = A_ref + a the pairing is A(η) = g + a(v), and the infinitesimal action
on the space of connections is

    ρ_A(η) = d(A(η)) + ι_v ω_A,

with moment map ⟨μ(A), η⟩ = 1/n! ∫ A(η) ω_Aⁿ. Gauge transformations
f = exp(2πi χ_tot) act by a ↦ a + dχ_tot, with moment map ν(A) = ω_Aⁿ/n!.
"""

import logging
from dataclasses import dataclass
from math import factorial, log2
from typing import Any, Dict, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from momentlab.connections.space import (
    BundleSetup,
    RelativeConnection,
    curvature,
    is_symplectic,
    omega_pairing,
    require_symplectic,
)
from momentlab.errors import CurvatureMismatchError, GridMismatchError, ProbeError
from momentlab.forms.calculus import (
    DifferentialForm,
    VectorField,
    contract,
    exterior_derivative,
    integrate,
    pairing,
    pullback_translation,
    wedge,
    wedge_power,
)
from momentlab.forms.grid import Grid

logger = logging.getLogger(__name__)

CURVATURE_MATCH_TOLERANCE = 1e-10
INTEGER_SNAP = 1e-9


@dataclass(frozen=True, eq=False)
class InvariantField:
    """
    Lie-algebra element η = (v, g) of the bundle automorphism group.

    Attributes:
        v: Pushforward of η to the base.
        g: The function A_ref(η).
    """

    v: VectorField
    g: np.ndarray

    def __post_init__(self) -> None:
        if np.shape(self.g) != self.v.grid.shape:
            raise GridMismatchError(f"g has shape {np.shape(self.g)}, grid is {self.v.grid.shape}")

    @property
    def grid(self) -> Grid:
        return self.v.grid

    @classmethod
    def vertical(cls, grid: Grid, g: Any) -> "InvariantField":
        """Pure gauge direction (0, g)."""
        values = np.array(np.broadcast_to(np.asarray(g, dtype=float), grid.shape))
        return cls(VectorField.zero(grid), values)

    @classmethod
    def horizontal(cls, v: VectorField) -> "InvariantField":
        """Reference-horizontal lift (v, 0)."""
        return cls(v, v.grid.zeros())


@dataclass(frozen=True, eq=False)
class GaugeTransformation:
    """
    Gauge transformation f = exp(2πi χ_tot) with χ_tot = χ + winding·x.

    Example:
        >>> f = GaugeTransformation(grid.zeros(), (1, 0))
        >>> gauge_act(f, connection).a  # a + dx₁
    """

    chi: np.ndarray
    winding: Tuple[int, ...]

    def __add__(self, other: "GaugeTransformation") -> "GaugeTransformation":
        return GaugeTransformation(
            self.chi + other.chi, tuple(int(x + y) for x, y in zip(self.winding, other.winding))
        )

    @classmethod
    def identity(cls, grid: Grid) -> "GaugeTransformation":
        return cls(grid.zeros(), (0,) * grid.dim)

    def phase_differential(self, grid: Grid) -> DifferentialForm:
        """dχ_tot = dχ + Σ winding_i dx_i."""
        if len(self.winding) != grid.dim:
            raise GridMismatchError(
                f"winding has {len(self.winding)} entries, grid needs {grid.dim}"
            )
        periodic = exterior_derivative(DifferentialForm.scalar(grid, self.chi))
        return periodic + DifferentialForm.one_form(grid, [float(m) for m in self.winding])


@dataclass(frozen=True)
class FibreClass:
    """
    Point of H¹(M,R)/H¹(M,Z) labelling a fibre of fixed-curvature connections.

    Attributes:
        lift: Unreduced harmonic coefficients.
    """

    lift: Tuple[float, ...]

    @property
    def coefficients(self) -> Tuple[float, ...]:
        """Representative in [0, 1)^{2n}."""
        reduced = np.mod(np.asarray(self.lift), 1.0)
        reduced[np.abs(reduced - 1.0) < INTEGER_SNAP] = 0.0
        reduced[np.abs(reduced) < INTEGER_SNAP] = 0.0
        return tuple(float(x) for x in reduced)

    def is_integral(self) -> bool:
        return all(c == 0.0 for c in self.coefficients)

    def to_dict(self) -> Dict[str, Any]:
        return {"lift": list(self.lift), "coefficients": list(self.coefficients)}


class MomentCheck(NamedTuple):
    residual: float
    order: float
    resolved: bool


# ── Lie-algebra action ────────────────────────────────────────────────────


def pair_connection(connection: RelativeConnection, eta: InvariantField) -> np.ndarray:
    """A(η) = g + a(v)."""
    if eta.grid != connection.grid:
        raise GridMismatchError(f"field grid {eta.grid} != connection grid {connection.grid}")
    return eta.g + pairing(connection.a, eta.v)


def infinitesimal_action(connection: RelativeConnection, eta: InvariantField) -> DifferentialForm:
    """ρ_A(η) = d(A(η)) + ι_v ω_A."""
    omega = require_symplectic(connection)
    potential = DifferentialForm.scalar(connection.grid, pair_connection(connection, eta))
    return exterior_derivative(potential) + contract(eta.v, omega)


def volume_density(connection: RelativeConnection) -> DifferentialForm:
    """ν(A) = ω_Aⁿ/n!, the moment map of the gauge group."""
    n = connection.grid.half_dim
    return wedge_power(curvature(connection), n) * (1.0 / factorial(n))


def moment_pairing(connection: RelativeConnection, eta: InvariantField) -> float:
    """⟨μ(A), η⟩ = 1/n! ∫ A(η) ω_Aⁿ."""
    require_symplectic(connection)
    density = volume_density(connection).density
    return float(np.mean(pair_connection(connection, eta) * density))


def _probe_moment(
    connection: RelativeConnection, b: DifferentialForm, eta: InvariantField, eps: float
) -> float:
    probe = connection.shifted(b, eps)
    check = is_symplectic(curvature(probe))
    if not check.symplectic:
        raise ProbeError(
            f"probe A {'+' if eps > 0 else '-'} {abs(eps):g}·b leaves the symplectic set "
            f"(margin {check.margin:.3e})",
            check.margin,
        )
    return moment_pairing(probe, eta)


def moment_identity_residual(
    connection: RelativeConnection,
    b: DifferentialForm,
    eta: InvariantField,
    eps: float,
    nominal_order: float = 2.0,
) -> MomentCheck:
    """
    Check the moment-map identity d⟨μ, η⟩(b) = Ω_A(b, ρ_A(η)) by central differences.

    The residual is measured at ``eps``; the convergence order is the
    Richardson exponent between ``eps`` and ``eps/2``. When either error is
    at the rounding floor (on T² the moment is quadratic in eps and the
    central difference is exact) the nominal order is reported with
    ``resolved=False``.

    Raises:
        ProbeError: if A ± eps·b is not symplectic.
    """
    target = omega_pairing(connection, b, infinitesimal_action(connection, eta))
    errors = []
    scale = 1.0
    for step in (eps, eps / 2.0):
        plus = _probe_moment(connection, b, eta, step)
        minus = _probe_moment(connection, b, eta, -step)
        scale = max(scale, abs(plus), abs(minus))
        errors.append(abs((plus - minus) / (2.0 * step) - target))
    floor = 100.0 * np.finfo(float).eps * scale / (eps / 2.0)
    resolved = min(errors) > floor
    order = log2(errors[0] / errors[1]) if resolved else nominal_order
    logger.debug(
        "moment identity: target=%.6e err(eps)=%.3e err(eps/2)=%.3e order=%.3f resolved=%s",
        target,
        errors[0],
        errors[1],
        order,
        resolved,
    )
    return MomentCheck(errors[0], order, resolved)


def translation_flow(
    connection: RelativeConnection, velocity: Sequence[float], t: float
) -> RelativeConnection:
    """
    Flow of the reference-horizontal lift of a constant vector field for time t.

    a_t = τ_{tv}^* a + t ι_v ω_ref, whose t-derivative at 0 is ρ_A((v, 0)).
    """
    grid = connection.grid
    v = VectorField.from_components(grid, [float(c) for c in velocity])
    moved = pullback_translation(connection.a, [t * float(c) for c in velocity])
    drift = contract(v, connection.bundle.reference_curvature) * t
    return RelativeConnection(connection.bundle, moved + drift)


# ── Gauge group and fibres ────────────────────────────────────────────────


def gauge_act(transform: GaugeTransformation, connection: RelativeConnection) -> RelativeConnection:
    """a ↦ a + dχ + winding·dx; the curvature is unchanged."""
    return RelativeConnection(
        connection.bundle, connection.a + transform.phase_differential(connection.grid)
    )


def fibre_class(connection: RelativeConnection, base: RelativeConnection) -> FibreClass:
    """
    Class of a − a₀ in H¹(M,R)/H¹(M,Z) for connections of equal curvature.

    Raises:
        CurvatureMismatchError: if the curvatures differ.
    """
    residual = (curvature(connection) - curvature(base)).norm_inf()
    if residual > CURVATURE_MATCH_TOLERANCE:
        raise CurvatureMismatchError(f"curvatures differ by {residual:.3e}", residual)
    difference = connection.a - base.a
    lift = tuple(float(np.mean(difference.components[(i,)])) for i in range(connection.grid.dim))
    return FibreClass(lift)


def fibre_pairing(alpha: Sequence[float], beta: Sequence[float], bundle: BundleSetup) -> float:
    """1/(n-1)! ∫ α ∧ β ∧ c₁^{n-1} on constant (harmonic) representatives."""
    grid = bundle.grid
    n = grid.half_dim
    top = wedge(
        wedge(
            DifferentialForm.one_form(grid, list(alpha)),
            DifferentialForm.one_form(grid, list(beta)),
        ),
        wedge_power(bundle.reference_curvature, n - 1),
    )
    return integrate(top) / factorial(n - 1)


@dataclass
class ProbeRecord:
    """JSON record of a residual probe."""

    name: str
    inputs_hash: str
    residual: float
    order: Optional[float] = None
    margin: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "inputs_hash": self.inputs_hash,
            "residual": self.residual,
            "order": self.order,
            "margin": self.margin,
        }
