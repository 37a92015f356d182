"""
MomentLab Sampling - Seeded random band-limited inputs.

Every random draw in the library goes through a numpy Generator (PCG64)
created from an explicit seed. Fields are short sums of low-frequency
Fourier modes, at most N/4 per axis, so products stay alias-free.
"""

import zlib
from typing import Optional, Tuple

import numpy as np

from momentlab.forms.calculus import DifferentialForm, VectorField
from momentlab.forms.grid import Grid, spectral_derivative

DEFAULT_MODES = 4
DEFAULT_MAX_FREQUENCY = 2
RNG_ALGORITHM = "PCG64"


def make_rng(seed: int) -> np.random.Generator:
    """Generator for ``seed`` using the PCG64 bit generator."""
    return np.random.Generator(np.random.PCG64(seed))


def stream_rng(seed: int, stream: str) -> np.random.Generator:
    """Independent PCG64 stream for a named consumer, stable under reordering."""
    key = zlib.crc32(stream.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key,))))


def _max_frequency(grid: Grid, requested: Optional[int]) -> int:
    cap = grid.resolution // 4
    return max(1, min(cap, requested if requested is not None else DEFAULT_MAX_FREQUENCY))


def random_field(
    rng: np.random.Generator,
    grid: Grid,
    amplitude: float = 1.0,
    modes: int = DEFAULT_MODES,
    max_frequency: Optional[int] = None,
) -> np.ndarray:
    """
    Mean-zero sum of ``modes`` random cosines with sup-norm at most ``amplitude``.

    Example:
        >>> field = random_field(make_rng(1), Grid(1, 64), amplitude=0.1)
    """
    k_max = _max_frequency(grid, max_frequency)
    coords = grid.coordinates()
    values = grid.zeros()
    weights = rng.uniform(-1.0, 1.0, size=modes)
    weights = weights / max(1.0, float(np.sum(np.abs(weights))))
    for weight in weights:
        wavevector = rng.integers(-k_max, k_max + 1, size=grid.dim)
        while not np.any(wavevector):
            wavevector = rng.integers(-k_max, k_max + 1, size=grid.dim)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        argument = sum(2.0 * np.pi * int(k) * x for k, x in zip(wavevector, coords))
        values = values + weight * np.cos(argument + phase)
    return amplitude * values


def random_one_form(
    rng: np.random.Generator,
    grid: Grid,
    amplitude: float = 1.0,
    constant: bool = True,
    max_frequency: Optional[int] = None,
) -> DifferentialForm:
    """1-form with random band-limited components (plus random constants)."""
    components = []
    for _ in range(grid.dim):
        field = random_field(rng, grid, amplitude, max_frequency=max_frequency)
        if constant:
            field = field + amplitude * rng.uniform(-1.0, 1.0)
        components.append(field)
    return DifferentialForm.one_form(grid, components)


def random_vector_field(
    rng: np.random.Generator, grid: Grid, amplitude: float = 1.0
) -> VectorField:
    return VectorField.from_components(
        grid,
        [
            random_field(rng, grid, amplitude) + amplitude * rng.uniform(-1.0, 1.0)
            for _ in range(grid.dim)
        ],
    )


def random_exact_one_form(
    rng: np.random.Generator, grid: Grid, amplitude: float = 1.0
) -> Tuple[np.ndarray, DifferentialForm]:
    """(χ, dχ) for a random periodic χ."""
    chi = random_field(rng, grid, amplitude)
    components = [spectral_derivative(chi, axis) for axis in range(grid.dim)]
    return chi, DifferentialForm.one_form(grid, components)


def divergence_free_field(
    rng: np.random.Generator, grid: Grid, amplitude: float = 1.0
) -> VectorField:
    """
    Vector field preserving every standard symplectic plane.

    u = (∂₂ψ, -∂₁ψ, ∂₄χ, -∂₃χ) for random stream functions ψ, χ.
    """
    components = []
    for j in range(grid.half_dim):
        stream = random_field(rng, grid, amplitude)
        components.append(spectral_derivative(stream, 2 * j + 1))
        components.append(-spectral_derivative(stream, 2 * j))
    return VectorField.from_components(grid, components)
