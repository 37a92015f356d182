"""
Uniform periodic grids on flat tori T^{2n} = (R/Z)^{2n}.

Spectral symbols are cached per grid: a Grid is immutable and hashable, so
wavenumber tables are built once and shared by every form on it.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

DEFAULT_RESOLUTION = {1: 64, 2: 16}


@dataclass(frozen=True)
class Grid:
    """
    Uniform grid with ``resolution`` points per axis on T^{2 * half_dim}.

    Axis ``i`` (0-based) carries the coordinate x_{i+1} in [0, 1).

    Example:
        >>> grid = Grid(half_dim=1, resolution=64)
        >>> grid.shape
        (64, 64)
    """

    half_dim: int
    resolution: int

    def __post_init__(self) -> None:
        if self.half_dim not in (1, 2):
            raise ValueError(f"half_dim must be 1 or 2, got {self.half_dim}")
        if self.resolution < 8 or self.resolution % 2:
            raise ValueError(f"resolution must be even and >= 8, got {self.resolution}")

    @classmethod
    def default(cls, half_dim: int) -> "Grid":
        """Desk-scale default grid: N = 64 on T², N = 16 on T⁴."""
        return cls(half_dim=half_dim, resolution=DEFAULT_RESOLUTION[half_dim])

    @property
    def dim(self) -> int:
        return 2 * self.half_dim

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.resolution,) * self.dim

    @property
    def size(self) -> int:
        return self.resolution**self.dim

    @property
    def axes(self) -> Tuple[int, ...]:
        """Axis tuple passed to the n-dimensional FFTs."""
        return tuple(range(self.dim))

    def coordinates(self) -> Tuple[np.ndarray, ...]:
        """Coordinate fields (x_1, ..., x_{2n}), each of shape ``self.shape``."""
        return _coordinates(self)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)

    def ones(self) -> np.ndarray:
        return np.ones(self.shape)

    def to_dict(self) -> dict:
        return {"half_dim": self.half_dim, "resolution": self.resolution}


@lru_cache(maxsize=None)
def _coordinates(grid: Grid) -> Tuple[np.ndarray, ...]:
    axis = np.arange(grid.resolution) / grid.resolution
    mesh = np.meshgrid(*([axis] * grid.dim), indexing="ij")
    for m in mesh:
        m.setflags(write=False)
    return tuple(mesh)


@lru_cache(maxsize=None)
def odd_wavenumbers(resolution: int) -> np.ndarray:
    """Angular wavenumbers 2πk for a full FFT axis, Nyquist mode zeroed."""
    k = 2.0 * np.pi * np.fft.fftfreq(resolution, d=1.0 / resolution)
    k[resolution // 2] = 0.0
    k.setflags(write=False)
    return k


@lru_cache(maxsize=None)
def odd_wavenumbers_half(resolution: int) -> np.ndarray:
    """Angular wavenumbers for an rfft axis, Nyquist mode zeroed."""
    k = 2.0 * np.pi * np.fft.rfftfreq(resolution, d=1.0 / resolution)
    k[-1] = 0.0
    k.setflags(write=False)
    return k


@lru_cache(maxsize=None)
def rfftn_wavenumbers(grid: Grid) -> Tuple[np.ndarray, ...]:
    """Per-axis wavenumbers broadcast to the ``rfftn`` layout of ``grid``."""
    out: List[np.ndarray] = []
    for axis in range(grid.dim):
        if axis == grid.dim - 1:
            k = odd_wavenumbers_half(grid.resolution)
        else:
            k = odd_wavenumbers(grid.resolution)
        shape = [1] * grid.dim
        shape[axis] = k.size
        out.append(k.reshape(shape))
    return tuple(out)


@lru_cache(maxsize=None)
def laplacian_symbol(grid: Grid) -> np.ndarray:
    """Symbol |k|² of the positive flat Laplacian in ``rfftn`` layout."""
    symbol = sum(k * k for k in rfftn_wavenumbers(grid))
    symbol = np.asarray(symbol, dtype=float)
    symbol.setflags(write=False)
    return symbol


def spectral_derivative(field: np.ndarray, axis: int) -> np.ndarray:
    """Exact derivative ∂/∂x_{axis+1} of the trigonometric interpolant of ``field``."""
    n = field.shape[axis]
    k = odd_wavenumbers_half(n)
    shape = [1] * field.ndim
    shape[axis] = k.size
    spectrum = np.fft.rfft(field, axis=axis)
    return np.fft.irfft(1j * k.reshape(shape) * spectrum, n=n, axis=axis)


def laplacian(field: np.ndarray, grid: Grid) -> np.ndarray:
    """Flat Laplacian Σ ∂²f/∂x_i² (negative semi-definite)."""
    spectrum = np.fft.rfftn(field, axes=grid.axes)
    return np.fft.irfftn(-laplacian_symbol(grid) * spectrum, s=grid.shape, axes=grid.axes)


def inverse_laplacian(field: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Mean-zero solution u of Δu = f for the flat Laplacian.

    The constant mode of ``field`` is discarded; callers that need exact
    solvability must check it themselves.
    """
    symbol = laplacian_symbol(grid)
    spectrum = np.fft.rfftn(field, axes=grid.axes)
    solved = np.zeros_like(spectrum)
    nonzero = symbol > 0
    solved[nonzero] = -spectrum[nonzero] / symbol[nonzero]
    return np.fft.irfftn(solved, s=grid.shape, axes=grid.axes)


def translate(field: np.ndarray, shift: Tuple[float, ...], grid: Grid) -> np.ndarray:
    """Values of the band-limited interpolant at x + shift."""
    spectrum = np.fft.rfftn(field, axes=grid.axes)
    phase = sum(k * s for k, s in zip(rfftn_wavenumbers(grid), shift))
    return np.fft.irfftn(spectrum * np.exp(1j * phase), s=grid.shape, axes=grid.axes)
