"""
MomentLab Hopf Bundle - The prequantum circle bundle S³ → S².

Points of S³ ⊂ C² are arrays of shape (..., 2) of complex numbers. The
projection is

    p(z) = (2 Re(z̄₁z₂), 2 Im(z̄₁z₂), |z₁|² - |z₂|²),

the connection is A(w) = (1/2π) Im⟨z, w⟩ with vertical generator
V(z) = 2πi z (period 1, A(V) = 1), and dA = p*ω for ω = σ/4π, the area
form normalized to total area 1.
"""

import logging
from dataclasses import dataclass
from math import pi
from typing import Tuple

import numpy as np

from momentlab.errors import TangencyError

logger = logging.getLogger(__name__)

CONNECTION_SCALE = 1.0 / (2.0 * pi)
TANGENCY_TOLERANCE = 1e-10
PLAQUETTE_NODES = 8


def inner(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Hermitian product ⟨z, w⟩ = Σ z̄_k w_k, conjugate-linear in z."""
    return np.sum(np.conj(z) * w, axis=-1)


def normalize(z: np.ndarray) -> np.ndarray:
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_points(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform points on S³ from a seeded generator."""
    raw = rng.standard_normal((count, 2)) + 1j * rng.standard_normal((count, 2))
    return normalize(raw)


def hopf_projection(z: np.ndarray) -> np.ndarray:
    """p(z) on the unit sphere in R³."""
    z1, z2 = z[..., 0], z[..., 1]
    cross = np.conj(z1) * z2
    return np.stack(
        [2.0 * cross.real, 2.0 * cross.imag, np.abs(z1) ** 2 - np.abs(z2) ** 2], axis=-1
    )


def projection_differential(z: np.ndarray, u: np.ndarray) -> np.ndarray:
    """dp_z(u)."""
    z1, z2 = z[..., 0], z[..., 1]
    u1, u2 = u[..., 0], u[..., 1]
    cross = np.conj(u1) * z2 + np.conj(z1) * u2
    return np.stack(
        [
            2.0 * cross.real,
            2.0 * cross.imag,
            2.0 * (np.conj(z1) * u1).real - 2.0 * (np.conj(z2) * u2).real,
        ],
        axis=-1,
    )


def vertical_generator(z: np.ndarray) -> np.ndarray:
    """V(z) = 2πi z."""
    return 2j * pi * z


def hopf_connection(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """
    A(w) = (1/2π) Im⟨z, w⟩ for w tangent to S³ at z.

    Raises:
        TangencyError: if Re⟨z, w⟩ does not vanish.
    """
    product = inner(z, w)
    normal = float(np.max(np.abs(product.real) / np.maximum(1.0, np.linalg.norm(w, axis=-1))))
    if normal > TANGENCY_TOLERANCE:
        raise TangencyError(f"vector is not tangent to S³ (|Re⟨z, w⟩| = {normal:.3e})", normal)
    return CONNECTION_SCALE * product.imag


def horizontal_basis(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Real basis (z⊥, i z⊥) of the horizontal space, z⊥ = (-z̄₂, z̄₁)."""
    perp = np.stack([-np.conj(z[..., 1]), np.conj(z[..., 0])], axis=-1)
    return perp, 1j * perp


def horizontal_lift(z: np.ndarray, x_dot: np.ndarray) -> np.ndarray:
    """Horizontal u at z with dp_z(u) = x_dot (x_dot tangent to S² at p(z))."""
    e1, e2 = horizontal_basis(z)
    f1 = projection_differential(z, e1)
    f2 = projection_differential(z, e2)
    # dp is conformal with factor 2 on the horizontal space
    c1 = np.sum(x_dot * f1, axis=-1) / 4.0
    c2 = np.sum(x_dot * f2, axis=-1) / 4.0
    return c1[..., None] * e1 + c2[..., None] * e2


def pulled_back_area(z: np.ndarray, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """p*ω(u, w) = (1/4π) p(z) · (dp u × dp w)."""
    x = hopf_projection(z)
    spanned = np.cross(projection_differential(z, u), projection_differential(z, w))
    return np.sum(x * spanned, axis=-1) / (4.0 * pi)


def _radial_connection(zeta: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Extension (1/2π) Im⟨ζ, dζ⟩/|ζ|² of A off the sphere, evaluated on ``direction``."""
    return CONNECTION_SCALE * inner(zeta, direction).imag / np.sum(np.abs(zeta) ** 2, axis=-1)


def plaquette_residual(z: np.ndarray, u: np.ndarray, w: np.ndarray, size: float = 1e-5) -> float:
    """
    |∮ A / size² - p*ω(u, w)| round a square of side ``size`` centred at z.

    The loop runs along straight edges in C² spanned by u and w; the
    connection is extended radially, so its curl is the pull-back of p*ω.
    """
    nodes, weights = np.polynomial.legendre.leggauss(PLAQUETTE_NODES)
    s = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    half = 0.5 * size
    corners = [z + half * (-u - w), z + half * (u - w), z + half * (u + w), z + half * (-u + w)]
    total = np.zeros(np.shape(z)[:-1])
    for k in range(4):
        start, end = corners[k], corners[(k + 1) % 4]
        edge = end - start
        for node, weight in zip(s, weights):
            total = total + weight * _radial_connection(start + node * edge, edge)
    residual = np.abs(total / size**2 - pulled_back_area(z, u, w))
    return float(np.max(residual))


# ── Hamiltonian rotations of S² ───────────────────────────────────────────


@dataclass(frozen=True)
class RotationHamiltonian:
    """
    Rotation by 2π per unit time about ``axis`` with mean-zero Hamiltonian h = (axis·x)/2.

    Attributes:
        axis: Unit vector in R³.
        shift: Constant added to h.
    """

    axis: Tuple[float, float, float]
    shift: float = 0.0

    @classmethod
    def about(cls, axis: Tuple[float, ...], shift: float = 0.0) -> "RotationHamiltonian":
        vector = np.asarray(axis, dtype=float)
        length = float(np.linalg.norm(vector))
        if length == 0.0:
            raise ValueError("rotation axis must be non-zero")
        unit = vector / length
        return cls((float(unit[0]), float(unit[1]), float(unit[2])), float(shift))

    @property
    def n(self) -> np.ndarray:
        return np.asarray(self.axis)

    def hamiltonian(self, x: np.ndarray) -> np.ndarray:
        return 0.5 * (x @ self.n) + self.shift

    def vector_field(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * pi * np.cross(self.n, x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """Tangential gradient of h on the sphere."""
        half = 0.5 * self.n
        return half - np.sum(half * x, axis=-1, keepdims=True) * x


def rotation_hamiltonian(axis: Tuple[float, ...]) -> RotationHamiltonian:
    """Hamiltonian pair (h, v) for the unit-speed rotation about ``axis``."""
    return RotationHamiltonian.about(axis)


def hamiltonian_residual(
    rotation: RotationHamiltonian, points: np.ndarray, tangents: np.ndarray
) -> float:
    """max |ι_v ω(Y) - dh(Y)| over sample points x with tangent vectors Y."""
    v = rotation.vector_field(points)
    contraction = np.sum(points * np.cross(v, tangents), axis=-1) / (4.0 * pi)
    differential = np.sum(rotation.gradient(points) * tangents, axis=-1)
    return float(np.max(np.abs(contraction - differential)))


def lift_generator(rotation: RotationHamiltonian, z: np.ndarray, speed: float = 1.0) -> np.ndarray:
    """
    Prequantum lift of ``speed`` times the rotation: horizontal lift of v minus h·V.

    Its connection value is -speed·h(p(z)).
    """
    x = hopf_projection(z)
    horizontal = horizontal_lift(z, rotation.vector_field(x))
    vertical = rotation.hamiltonian(x)[..., None] * vertical_generator(z)
    return speed * (horizontal - vertical)
