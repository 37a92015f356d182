"""
MomentLab Connection Space - Unitary connections with symplectic curvature.

A connection on the prequantum line bundle over T^{2n} is stored relative to
a fixed reference connection whose curvature ω_ref has constant integer
coefficients. In the real normalization the curvature of A = A_ref + a is

    ω_A = ω_ref + da

and the symplectic structure on the space of such connections is

    Ω_A(a, b) = 1/(n-1)! ∫ a ∧ b ∧ ω_A^{n-1}.
"""

import json
import logging
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Any, Dict, NamedTuple, Tuple, Union

import numpy as np

from momentlab.errors import DegreeError, GridMismatchError, NotClosedError, NotSymplecticError
from momentlab.forms.calculus import (
    CLOSEDNESS_TOLERANCE,
    DifferentialForm,
    VectorField,
    contract,
    exterior_derivative,
    integrate,
    one_form_from_stacked,
    two_form_matrix,
    wedge,
    wedge_power,
)
from momentlab.forms.fields_io import read_form, write_form
from momentlab.forms.grid import Grid

logger = logging.getLogger(__name__)

ChernData = Tuple[Tuple[Tuple[int, int], int], ...]


@dataclass(frozen=True)
class BundleSetup:
    """
    Line bundle over T^{2n} described by its reference curvature.

    Attributes:
        grid: Grid the connection fields live on.
        chern_data: Pairs ((i, j), k) meaning ω_ref ∋ k dx_{i+1} ∧ dx_{j+1}.
    """

    grid: Grid
    chern_data: ChernData

    def __post_init__(self) -> None:
        dim = self.grid.dim
        for (i, j), k in self.chern_data:
            if not (0 <= i < j < dim):
                raise DegreeError(f"chern_data index {(i, j)} is not increasing in range({dim})")
            if int(k) != k:
                raise ValueError(f"chern_data coefficient {k} is not an integer")

    @classmethod
    def standard(cls, grid: Grid) -> "BundleSetup":
        """ω_ref = dx₁∧dx₂ (+ dx₃∧dx₄ on T⁴)."""
        return cls(grid, tuple(((2 * j, 2 * j + 1), 1) for j in range(grid.half_dim)))

    @property
    def half_dim(self) -> int:
        return self.grid.half_dim

    @property
    def reference_curvature(self) -> DifferentialForm:
        return DifferentialForm.from_components(
            self.grid, 2, {index: float(k) for index, k in self.chern_data}
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "half_dim": self.grid.half_dim,
            "resolution": self.grid.resolution,
            "chern_data": [[list(index), int(k)] for index, k in self.chern_data],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BundleSetup":
        grid = Grid(half_dim=int(data["half_dim"]), resolution=int(data["resolution"]))
        chern = tuple((tuple(index), int(k)) for index, k in data["chern_data"])
        return cls(grid, chern)  # type: ignore[arg-type]


@dataclass(frozen=True, eq=False)
class RelativeConnection:
    """Connection A_ref + a, with ``a`` a real 1-form."""

    bundle: BundleSetup
    a: DifferentialForm

    def __post_init__(self) -> None:
        if self.a.degree != 1:
            raise DegreeError(f"connection offset must be a 1-form, got degree {self.a.degree}")
        if self.a.grid != self.bundle.grid:
            raise GridMismatchError(f"offset grid {self.a.grid} != bundle grid {self.bundle.grid}")

    @classmethod
    def reference(cls, bundle: BundleSetup) -> "RelativeConnection":
        return cls(bundle, DifferentialForm.zero(bundle.grid, 1))

    @property
    def grid(self) -> Grid:
        return self.bundle.grid

    def shifted(self, b: DifferentialForm, scale: float = 1.0) -> "RelativeConnection":
        """The connection A + scale·b."""
        return RelativeConnection(self.bundle, self.a + b * scale)


class SymplecticCheck(NamedTuple):
    symplectic: bool
    margin: float


# ── Curvature and positivity ──────────────────────────────────────────────


def curvature(connection: RelativeConnection) -> DifferentialForm:
    """ω_A = ω_ref + da."""
    return connection.bundle.reference_curvature + exterior_derivative(connection.a)


def pfaffian(omega: DifferentialForm) -> np.ndarray:
    """
    Pointwise Pfaffian of a 2-form against the standard orientation.

    For n = 1 this is the dx₁∧dx₂ coefficient; for n = 2 it is
    ω₁₂ω₃₄ − ω₁₃ω₂₄ + ω₁₄ω₂₃, so that ω²/2 = Pf · dV.
    """
    if omega.degree != 2:
        raise DegreeError("pfaffian needs a 2-form")
    if omega.grid.half_dim == 1:
        return omega[(0, 1)]
    return (
        omega[(0, 1)] * omega[(2, 3)]
        - omega[(0, 2)] * omega[(1, 3)]
        + omega[(0, 3)] * omega[(1, 2)]
    )


def is_symplectic(omega: DifferentialForm) -> SymplecticCheck:
    """
    Positivity test for a closed 2-form.

    Returns:
        SymplecticCheck(symplectic, margin) with margin = min Pf(ω).

    Raises:
        NotClosedError: if |dω| exceeds the closedness tolerance.
    """
    if omega.degree != 2:
        raise DegreeError("is_symplectic needs a 2-form")
    if omega.grid.dim > 2:
        residual = exterior_derivative(omega).norm_inf()
        if residual > CLOSEDNESS_TOLERANCE:
            raise NotClosedError(f"2-form is not closed, |dω| = {residual:.3e}", residual)
    margin = float(np.min(pfaffian(omega)))
    return SymplecticCheck(margin > 0.0, margin)


def require_symplectic(connection: RelativeConnection) -> DifferentialForm:
    """Curvature of ``connection``, or NotSymplecticError with the margin."""
    omega = curvature(connection)
    check = is_symplectic(omega)
    if not check.symplectic:
        raise NotSymplecticError(
            f"curvature is not symplectic (margin {check.margin:.3e})", check.margin
        )
    return omega


# ── The symplectic form Ω ─────────────────────────────────────────────────


def omega_pairing(
    connection: RelativeConnection, a: DifferentialForm, b: DifferentialForm
) -> float:
    """Ω_A(a, b) = 1/(n-1)! ∫ a ∧ b ∧ ω_A^{n-1}."""
    omega = require_symplectic(connection)
    n = connection.grid.half_dim
    top = wedge(wedge(a, b), wedge_power(omega, n - 1))
    return integrate(top) / factorial(n - 1)


def standard_j(a: DifferentialForm) -> DifferentialForm:
    """Flat complex structure on 1-forms: J dx_{2j-1} = dx_{2j}, J dx_{2j} = -dx_{2j-1}."""
    if a.degree != 1:
        raise DegreeError("standard_j needs a 1-form")
    components: Dict[Tuple[int, ...], np.ndarray] = {}
    for j in range(a.grid.half_dim):
        components[(2 * j,)] = -a.components[(2 * j + 1,)]
        components[(2 * j + 1,)] = a.components[(2 * j,)].copy()
    return DifferentialForm(a.grid, 1, components)


def _inverse_polar_factor(matrix: np.ndarray) -> np.ndarray:
    """Pointwise P⁻¹ for P = sqrt(WᵀW)."""
    gram = np.swapaxes(matrix, -1, -2) @ matrix
    values, vectors = np.linalg.eigh(gram)
    scaled = vectors / np.sqrt(values)[..., None, :]
    return scaled @ np.swapaxes(vectors, -1, -2)


def apply_compatible_j(connection: RelativeConnection, a: DifferentialForm) -> DifferentialForm:
    """
    Apply the ω_A-compatible complex structure J_A to a 1-form.

    On T² every positive area form is compatible with the standard rotation.
    On T⁴, J_A = -W P⁻¹ with W the coefficient matrix of ω_A and P its polar
    factor, so that Ω_A(a, J_A a) = ∫ Pf(ω_A) · aᵀP⁻¹a dV.
    """
    omega = require_symplectic(connection)
    if connection.grid.half_dim == 1:
        return standard_j(a)
    matrix = two_form_matrix(omega)
    j_matrix = -matrix @ _inverse_polar_factor(matrix)
    return one_form_from_stacked(a.grid, np.einsum("...ij,...j->...i", j_matrix, a.coefficients()))


def compatible_norm(connection: RelativeConnection, a: DifferentialForm) -> float:
    """(1/n!) ∫ |a|²_{g_A} ω_Aⁿ for the metric g_A = ω_A(·, J_A ·)."""
    omega = require_symplectic(connection)
    matrix = two_form_matrix(omega)
    coeffs = a.coefficients()
    quad = np.einsum("...i,...ij,...j->...", coeffs, _inverse_polar_factor(matrix), coeffs)
    return float(np.mean(pfaffian(omega) * quad))


def flat_norm(connection: RelativeConnection, a: DifferentialForm) -> float:
    """(1/n!) ∫ |a|² ω_Aⁿ with |a| the flat pointwise norm."""
    omega = require_symplectic(connection)
    return float(np.mean(pfaffian(omega) * np.sum(a.coefficients() ** 2, axis=-1)))


# ── Algebraic identities ─────────────────────────────────────────────────


def d_omega_residual(
    connection: RelativeConnection,
    a: DifferentialForm,
    b: DifferentialForm,
    c: DifferentialForm,
) -> float:
    """Cyclic sum 1/(n-2)! ∫ (da∧b∧c + db∧c∧a + dc∧a∧b) ∧ ω_A^{n-2}; zero iff dΩ = 0."""
    n = connection.grid.half_dim
    if n < 2:
        return 0.0
    omega = curvature(connection)
    power = wedge_power(omega, n - 2)
    total = 0.0
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        total += integrate(wedge(wedge(wedge(exterior_derivative(x), y), z), power))
    return abs(total) / factorial(n - 2)


def contraction_identity_residual(
    alpha: DifferentialForm, beta: DifferentialForm, vector: VectorField
) -> float:
    """L∞ norm of α(v)βⁿ − n α ∧ ι_vβ ∧ β^{n-1}."""
    n = alpha.grid.half_dim
    left = wedge(contract(vector, alpha), wedge_power(beta, n))
    right = wedge(wedge(alpha, contract(vector, beta)), wedge_power(beta, n - 1)) * float(n)
    return (left - right).norm_inf()


# ── Serialization ─────────────────────────────────────────────────────────


def bundle_header_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".bundle.json")


def write_connection(connection: RelativeConnection, path: Union[str, Path]) -> Path:
    """Write the offset 1-form plus a bundle header next to it."""
    path = write_form(connection.a, path)
    bundle_header_path(path).write_text(
        json.dumps(connection.bundle.to_dict(), sort_keys=True, indent=2) + "\n"
    )
    return path


def read_connection(path: Union[str, Path]) -> RelativeConnection:
    bundle = BundleSetup.from_dict(json.loads(bundle_header_path(path).read_text()))
    return RelativeConnection(bundle, read_form(path))
