"""
Spectral exterior calculus on flat tori.

A DifferentialForm stores one real scalar field per increasing multi-index.
Derivatives are exact on trigonometric interpolants; products are pointwise,
so inputs should stay below N/4 in frequency to keep wedge products
alias-free.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

from momentlab.errors import DegreeError, GridMismatchError, NotExactError
from momentlab.forms.grid import Grid, inverse_laplacian, spectral_derivative, translate

Index = Tuple[int, ...]
Scalar = Union[float, int, np.ndarray]

EXACTNESS_TOLERANCE = 1e-10
CLOSEDNESS_TOLERANCE = 1e-8


def multi_indices(dim: int, degree: int) -> List[Index]:
    """Increasing multi-indices of length ``degree`` in ``range(dim)``."""
    return list(combinations(range(dim), degree))


def _insertion_sign(j: int, index: Index) -> int:
    """Sign of moving dx_j from the front of dx_index into sorted position."""
    return -1 if sum(1 for i in index if i < j) % 2 else 1


def _sort_with_sign(index: Sequence[int]) -> Tuple[Index, int]:
    """Sort ``index`` and return the permutation sign (0 if it repeats)."""
    items = list(index)
    if len(set(items)) != len(items):
        return tuple(sorted(items)), 0
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return tuple(items), sign


@dataclass(frozen=True, eq=False)
class DifferentialForm:
    """
    Degree-k form on a periodic grid.

    Attributes:
        grid: The grid every component lives on.
        degree: Form degree k, 0 <= k <= 2n.
        components: One field per increasing multi-index (0-based axes).
    """

    grid: Grid
    degree: int
    components: Mapping[Index, np.ndarray]

    def __post_init__(self) -> None:
        if not 0 <= self.degree <= self.grid.dim:
            raise DegreeError(f"degree {self.degree} outside [0, {self.grid.dim}]")
        expected = multi_indices(self.grid.dim, self.degree)
        if sorted(self.components) != expected:
            raise DegreeError(
                f"degree-{self.degree} form needs components {expected}, "
                f"got {sorted(self.components)}"
            )
        for index, field in self.components.items():
            if np.shape(field) != self.grid.shape:
                raise GridMismatchError(
                    f"component {index} has shape {np.shape(field)}, grid is {self.grid.shape}"
                )

    # ── Construction ──────────────────────────────────────────────────────

    @classmethod
    def zero(cls, grid: Grid, degree: int) -> "DifferentialForm":
        return cls(grid, degree, {i: grid.zeros() for i in multi_indices(grid.dim, degree)})

    @classmethod
    def from_components(
        cls, grid: Grid, degree: int, components: Mapping[Index, Scalar]
    ) -> "DifferentialForm":
        """Build a form from a partial mapping; missing components are zero."""
        full: Dict[Index, np.ndarray] = {}
        for index in multi_indices(grid.dim, degree):
            full[index] = grid.zeros()
        for index, value in components.items():
            key, sign = _sort_with_sign(index)
            if key not in full:
                raise DegreeError(f"index {index} is not a degree-{degree} index")
            if sign == 0:
                continue
            filled = np.broadcast_to(np.asarray(value, dtype=float), grid.shape)
            full[key] = full[key] + sign * filled
        return cls(grid, degree, full)

    @classmethod
    def scalar(cls, grid: Grid, values: Scalar) -> "DifferentialForm":
        """0-form from a field or a constant."""
        return cls.from_components(grid, 0, {(): values})

    @classmethod
    def volume(cls, grid: Grid, density: Scalar = 1.0) -> "DifferentialForm":
        """Top-degree form density · dx_1 ∧ ... ∧ dx_{2n}."""
        return cls.from_components(grid, grid.dim, {tuple(range(grid.dim)): density})

    @classmethod
    def one_form(cls, grid: Grid, coefficients: Sequence[Scalar]) -> "DifferentialForm":
        """1-form Σ c_i dx_{i+1}; coefficients may be constants or fields."""
        if len(coefficients) != grid.dim:
            raise DegreeError(f"need {grid.dim} coefficients, got {len(coefficients)}")
        return cls.from_components(grid, 1, {(i,): c for i, c in enumerate(coefficients)})

    # ── Accessors ─────────────────────────────────────────────────────────

    def __getitem__(self, index: Sequence[int]) -> np.ndarray:
        key, sign = _sort_with_sign(index)
        if sign == 0:
            return self.grid.zeros()
        return sign * self.components[key]

    @property
    def values(self) -> np.ndarray:
        """The field of a 0-form."""
        if self.degree != 0:
            raise DegreeError("values is only defined for 0-forms")
        return self.components[()]

    @property
    def density(self) -> np.ndarray:
        """Coefficient of a top-degree form against dx_1 ∧ ... ∧ dx_{2n}."""
        if self.degree != self.grid.dim:
            raise DegreeError("density is only defined for top-degree forms")
        return self.components[tuple(range(self.grid.dim))]

    def coefficients(self) -> np.ndarray:
        """1-form components stacked along a trailing axis."""
        if self.degree != 1:
            raise DegreeError("coefficients is only defined for 1-forms")
        return np.stack([self.components[(i,)] for i in range(self.grid.dim)], axis=-1)

    def norm_inf(self) -> float:
        return max((float(np.max(np.abs(f))) for f in self.components.values()), default=0.0)

    # ── Arithmetic ────────────────────────────────────────────────────────

    def _check_same(self, other: "DifferentialForm") -> None:
        if other.grid != self.grid:
            raise GridMismatchError(f"grids differ: {self.grid} vs {other.grid}")
        if other.degree != self.degree:
            raise DegreeError(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check_same(other)
        return DifferentialForm(
            self.grid, self.degree, {i: f + other.components[i] for i, f in self.components.items()}
        )

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check_same(other)
        return DifferentialForm(
            self.grid, self.degree, {i: f - other.components[i] for i, f in self.components.items()}
        )

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(self.grid, self.degree, {i: -f for i, f in self.components.items()})

    def __mul__(self, factor: Scalar) -> "DifferentialForm":
        return DifferentialForm(
            self.grid, self.degree, {i: f * factor for i, f in self.components.items()}
        )

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class VectorField:
    """Vector field with one component field per axis."""

    grid: Grid
    components: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.grid.dim:
            raise DegreeError(f"need {self.grid.dim} components, got {len(self.components)}")
        for c in self.components:
            if np.shape(c) != self.grid.shape:
                raise GridMismatchError(f"component shape {np.shape(c)} != {self.grid.shape}")

    @classmethod
    def from_components(cls, grid: Grid, components: Sequence[Scalar]) -> "VectorField":
        return cls(
            grid,
            tuple(
                np.array(np.broadcast_to(np.asarray(c, dtype=float), grid.shape))
                for c in components
            ),
        )

    @classmethod
    def zero(cls, grid: Grid) -> "VectorField":
        return cls(grid, tuple(grid.zeros() for _ in range(grid.dim)))

    def stacked(self) -> np.ndarray:
        return np.stack(self.components, axis=-1)

    def norm_inf(self) -> float:
        return max(float(np.max(np.abs(c))) for c in self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        if other.grid != self.grid:
            raise GridMismatchError(f"grids differ: {self.grid} vs {other.grid}")
        return VectorField(
            self.grid, tuple(a + b for a, b in zip(self.components, other.components))
        )

    def __mul__(self, factor: Scalar) -> "VectorField":
        return VectorField(self.grid, tuple(c * factor for c in self.components))

    __rmul__ = __mul__


def _require_same_grid(*items: Union[DifferentialForm, VectorField]) -> Grid:
    grid = items[0].grid
    for item in items[1:]:
        if item.grid != grid:
            raise GridMismatchError(f"grids differ: {grid} vs {item.grid}")
    return grid


# ── Core operators ────────────────────────────────────────────────────────


def exterior_derivative(form: DifferentialForm) -> DifferentialForm:
    """Exterior derivative d, computed by spectral differentiation."""
    grid = form.grid
    if form.degree >= grid.dim:
        raise DegreeError("exterior derivative of a top-degree form")
    cache: Dict[Tuple[int, Index], np.ndarray] = {}
    result: Dict[Index, np.ndarray] = {}
    for target in multi_indices(grid.dim, form.degree + 1):
        acc = grid.zeros()
        for position, axis in enumerate(target):
            source = target[:position] + target[position + 1 :]
            key = (axis, source)
            if key not in cache:
                cache[key] = spectral_derivative(form.components[source], axis)
            if position % 2:
                acc = acc - cache[key]
            else:
                acc = acc + cache[key]
        result[target] = acc
    return DifferentialForm(grid, form.degree + 1, result)


def wedge(left: DifferentialForm, right: DifferentialForm) -> DifferentialForm:
    """Pointwise exterior product with the standard sign rules."""
    grid = _require_same_grid(left, right)
    degree = left.degree + right.degree
    if degree > grid.dim:
        raise DegreeError(f"wedge degree {left.degree} + {right.degree} exceeds {grid.dim}")
    result = {index: grid.zeros() for index in multi_indices(grid.dim, degree)}
    for i, f in left.components.items():
        for j, g in right.components.items():
            key, sign = _sort_with_sign(i + j)
            if sign:
                result[key] = result[key] + sign * (f * g)
    return DifferentialForm(grid, degree, result)


def wedge_power(form: DifferentialForm, power: int) -> DifferentialForm:
    """``form ∧ ... ∧ form`` (``power`` times); the 0-th power is the constant 1."""
    if power < 0:
        raise ValueError("power must be non-negative")
    result = DifferentialForm.scalar(form.grid, 1.0)
    for _ in range(power):
        result = wedge(result, form)
    return result


def integrate(form: DifferentialForm) -> float:
    """Integral of a top-degree form over the unit-volume torus."""
    if form.degree != form.grid.dim:
        raise DegreeError(f"can only integrate degree-{form.grid.dim} forms, got {form.degree}")
    return float(np.mean(form.density))


def contract(vector: VectorField, form: DifferentialForm) -> DifferentialForm:
    """Interior product ι_v F."""
    grid = _require_same_grid(vector, form)
    if form.degree == 0:
        raise DegreeError("cannot contract a 0-form")
    result: Dict[Index, np.ndarray] = {}
    for target in multi_indices(grid.dim, form.degree - 1):
        acc = grid.zeros()
        for j in range(grid.dim):
            if j in target:
                continue
            key, _ = _sort_with_sign((j,) + target)
            acc = acc + _insertion_sign(j, target) * vector.components[j] * form.components[key]
        result[target] = acc
    return DifferentialForm(grid, form.degree - 1, result)


def pairing(form: DifferentialForm, vector: VectorField) -> np.ndarray:
    """The function a(v) for a 1-form a."""
    if form.degree != 1:
        raise DegreeError("pairing needs a 1-form")
    return contract(vector, form).values


def codifferential(form: DifferentialForm) -> DifferentialForm:
    """Flat-metric adjoint d* of the exterior derivative."""
    grid = form.grid
    if form.degree == 0:
        raise DegreeError("codifferential of a 0-form")
    result: Dict[Index, np.ndarray] = {}
    for target in multi_indices(grid.dim, form.degree - 1):
        acc = grid.zeros()
        for j in range(grid.dim):
            if j in target:
                continue
            key, _ = _sort_with_sign((j,) + target)
            sign = _insertion_sign(j, target)
            acc = acc - sign * spectral_derivative(form.components[key], j)
        result[target] = acc
    return DifferentialForm(grid, form.degree - 1, result)


def harmonic_part(form: DifferentialForm) -> np.ndarray:
    """Constant Fourier coefficients of a 1-form: its class in H¹ ≅ R^{2n}."""
    if form.degree != 1:
        raise DegreeError("harmonic_part needs a 1-form")
    return np.array([float(np.mean(form.components[(i,)])) for i in range(form.grid.dim)])


def hodge_primitive(form: DifferentialForm) -> DifferentialForm:
    """
    Minimal-norm primitive a of an exact form G: da = G and d*a = 0.

    Computed as a = d* Δ_H⁻¹ G, where Δ_H = dd* + d*d is minus the flat
    Laplacian on each component.

    Raises:
        NotExactError: if G has non-zero constant coefficients or is not closed.
    """
    grid = form.grid
    if form.degree == 0:
        raise DegreeError("0-forms have no primitive")
    offending = {
        index: float(np.mean(field))
        for index, field in form.components.items()
        if abs(np.mean(field)) > EXACTNESS_TOLERANCE
    }
    if offending:
        listing = ", ".join(f"{k}: {v:.3e}" for k, v in sorted(offending.items()))
        raise NotExactError(f"form is not exact, harmonic coefficients {listing}", offending)
    if form.degree < grid.dim:
        closure = exterior_derivative(form).norm_inf()
        if closure > CLOSEDNESS_TOLERANCE * max(1.0, form.norm_inf()):
            raise NotExactError(f"form is not closed, |dG| = {closure:.3e}")
    potential = DifferentialForm(
        grid,
        form.degree,
        {i: -inverse_laplacian(f, grid) for i, f in form.components.items()},
    )
    return codifferential(potential)


def metric_dual(form: DifferentialForm) -> VectorField:
    """Flat musical isomorphism: a_i dx_i ↦ a_i ∂x_i."""
    if form.degree != 1:
        raise DegreeError("metric_dual needs a 1-form")
    return VectorField(form.grid, tuple(form.components[(i,)].copy() for i in range(form.grid.dim)))


def pullback_translation(form: DifferentialForm, shift: Sequence[float]) -> DifferentialForm:
    """Pull-back of a form by the translation x ↦ x + shift (band-limited fields)."""
    if len(shift) != form.grid.dim:
        raise DegreeError(f"shift needs {form.grid.dim} entries")
    shift = tuple(float(s) for s in shift)
    return DifferentialForm(
        form.grid,
        form.degree,
        {i: translate(f, shift, form.grid) for i, f in form.components.items()},
    )


# ── Matrix views of 2-forms ───────────────────────────────────────────────


def two_form_matrix(form: DifferentialForm) -> np.ndarray:
    """Pointwise antisymmetric coefficient matrix W with ω = Σ_{i<j} W_ij dx_i ∧ dx_j."""
    if form.degree != 2:
        raise DegreeError("two_form_matrix needs a 2-form")
    dim = form.grid.dim
    matrix = np.zeros(form.grid.shape + (dim, dim))
    for (i, j), field in form.components.items():
        matrix[..., i, j] = field
        matrix[..., j, i] = -field
    return matrix


def one_form_from_stacked(grid: Grid, stacked: np.ndarray) -> DifferentialForm:
    components = {(i,): np.ascontiguousarray(stacked[..., i]) for i in range(grid.dim)}
    return DifferentialForm(grid, 1, components)
