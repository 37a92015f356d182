"""Tests for the space of connections and its symplectic form."""

import tempfile
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentlab.actions import GaugeTransformation, gauge_act
from momentlab.connections import (
    BundleSetup,
    RelativeConnection,
    apply_compatible_j,
    compatible_norm,
    contraction_identity_residual,
    curvature,
    d_omega_residual,
    flat_norm,
    is_symplectic,
    omega_pairing,
    read_connection,
    require_symplectic,
    standard_j,
    write_connection,
)
from momentlab.core import make_rng, random_field, random_one_form, random_vector_field
from momentlab.errors import DegreeError, GridMismatchError, NotClosedError, NotSymplecticError
from momentlab.forms import DifferentialForm, Grid

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def small_connection(rng, grid):
    """Random connection close to the reference one."""
    amplitude = 0.02 if grid.half_dim == 1 else 0.005
    return RelativeConnection(BundleSetup.standard(grid), random_one_form(rng, grid, amplitude))


# ═══════════════════════════════════════════════════════════════════════════════
# Bundles and connections
# ═══════════════════════════════════════════════════════════════════════════════


class TestBundleSetup:
    """Tests for BundleSetup."""

    def test_standard_t2(self):
        """Test the standard reference curvature on T²."""
        bundle = BundleSetup.standard(Grid(1, 8))
        assert bundle.chern_data == (((0, 1), 1),)
        assert np.all(bundle.reference_curvature[(0, 1)] == 1.0)

    def test_standard_t4(self):
        """Test the standard reference curvature on T⁴."""
        bundle = BundleSetup.standard(Grid(2, 8))
        assert bundle.chern_data == (((0, 1), 1), ((2, 3), 1))
        assert bundle.half_dim == 2
        assert np.all(bundle.reference_curvature[(0, 2)] == 0.0)

    def test_rejects_bad_index(self):
        """Test that chern_data indices must be increasing."""
        with pytest.raises(DegreeError):
            BundleSetup(Grid(1, 8), (((1, 0), 1),))

    def test_rejects_non_integer(self):
        """Test that chern_data coefficients must be integers."""
        with pytest.raises(ValueError):
            BundleSetup(Grid(1, 8), (((0, 1), 1.5),))

    def test_dict_round_trip(self):
        """Test to_dict and from_dict."""
        bundle = BundleSetup(Grid(2, 8), (((0, 1), 2), ((2, 3), 1)))
        assert BundleSetup.from_dict(bundle.to_dict()) == bundle


class TestRelativeConnection:
    """Tests for RelativeConnection."""

    def test_reference_curvature(self):
        """Test that the reference connection has curvature ω_ref."""
        bundle = BundleSetup.standard(Grid(2, 8))
        omega = curvature(RelativeConnection.reference(bundle))
        assert (omega - bundle.reference_curvature).norm_inf() == 0.0

    def test_offset_must_be_one_form(self):
        """Test that the offset must be a 1-form."""
        bundle = BundleSetup.standard(Grid(1, 8))
        with pytest.raises(DegreeError):
            RelativeConnection(bundle, DifferentialForm.zero(bundle.grid, 2))

    def test_offset_grid_must_match(self):
        """Test that the offset must live on the bundle grid."""
        bundle = BundleSetup.standard(Grid(1, 8))
        with pytest.raises(GridMismatchError):
            RelativeConnection(bundle, DifferentialForm.zero(Grid(1, 16), 1))

    def test_shifted(self):
        """Test A + s·b."""
        bundle = BundleSetup.standard(Grid(1, 8))
        b = DifferentialForm.one_form(bundle.grid, [1.0, 0.0])
        moved = RelativeConnection.reference(bundle).shifted(b, 0.5)
        assert np.all(moved.a[(0,)] == 0.5)

    def test_write_and_read(self):
        """Test that a connection and its bundle survive a write and read."""
        grid = Grid(1, 16)
        connection = small_connection(make_rng(0), grid)
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_connection(connection, Path(tmpdir) / "a.f64")
            loaded = read_connection(path)
        assert loaded.bundle == connection.bundle
        assert (loaded.a - connection.a).norm_inf() == 0.0


# ═══════════════════════════════════════════════════════════════════════════════
# Symplectic curvature
# ═══════════════════════════════════════════════════════════════════════════════


class TestSymplecticCurvature:
    """Tests for is_symplectic and require_symplectic."""

    def test_reference_margin(self):
        """Test the margin of the reference curvature."""
        for half_dim in (1, 2):
            bundle = BundleSetup.standard(Grid(half_dim, 8))
            check = is_symplectic(bundle.reference_curvature)
            assert check.symplectic
            assert check.margin == pytest.approx(1.0)

    def test_wrong_orientation(self):
        """Test that -dx₁∧dx₂ is not symplectic for the standard orientation."""
        grid = Grid(1, 8)
        check = is_symplectic(DifferentialForm.from_components(grid, 2, {(0, 1): -1.0}))
        assert not check.symplectic
        assert check.margin == pytest.approx(-1.0)

    def test_not_closed(self):
        """Test that a non-closed 2-form on T⁴ raises."""
        grid = Grid(2, 8)
        x3 = grid.coordinates()[2]
        omega = DifferentialForm.from_components(
            grid, 2, {(0, 1): 1.0 + 0.1 * np.cos(2 * np.pi * x3), (2, 3): 1.0}
        )
        with pytest.raises(NotClosedError) as excinfo:
            is_symplectic(omega)
        assert excinfo.value.residual > 0.1

    def test_require_symplectic_reports_margin(self):
        """Test that a degenerate curvature raises with its margin."""
        grid = Grid(1, 16)
        x1, _ = grid.coordinates()
        a = DifferentialForm.one_form(grid, [0.0, np.sin(2 * np.pi * x1) / np.pi])
        with pytest.raises(NotSymplecticError) as excinfo:
            require_symplectic(RelativeConnection(BundleSetup.standard(grid), a))
        assert excinfo.value.margin == pytest.approx(-1.0, abs=1e-10)


# ═══════════════════════════════════════════════════════════════════════════════
# The symplectic form Ω
# ═══════════════════════════════════════════════════════════════════════════════


class TestOmegaPairing:
    """Tests for Ω_A and its compatible complex structure."""

    def test_constant_forms(self):
        """Test Ω(dx₁, dx₂) = 1 on T² and T⁴."""
        for half_dim in (1, 2):
            grid = Grid(half_dim, 8)
            connection = RelativeConnection.reference(BundleSetup.standard(grid))
            dx1 = DifferentialForm.one_form(grid, [1.0] + [0.0] * (grid.dim - 1))
            dx2 = DifferentialForm.one_form(grid, [0.0, 1.0] + [0.0] * (grid.dim - 2))
            assert omega_pairing(connection, dx1, dx2) == pytest.approx(1.0)

    @given(seed=seeds)
    @settings(max_examples=10, deadline=None)
    def test_antisymmetry_t4(self, seed):
        """Test Ω(a, b) = -Ω(b, a) on T⁴."""
        grid = Grid(2, 8)
        rng = make_rng(seed)
        connection = small_connection(rng, grid)
        a, b = random_one_form(rng, grid), random_one_form(rng, grid)
        assert abs(omega_pairing(connection, a, b) + omega_pairing(connection, b, a)) < 1e-13

    @given(seed=seeds)
    @settings(max_examples=10, deadline=None)
    def test_bilinearity(self, seed):
        """Test linearity in the first slot on T²."""
        grid = Grid(1, 32)
        rng = make_rng(seed)
        connection = small_connection(rng, grid)
        a, b, c = (random_one_form(rng, grid) for _ in range(3))
        combined = omega_pairing(connection, a * 2.0 - b * 0.5, c)
        separate = 2.0 * omega_pairing(connection, a, c) - 0.5 * omega_pairing(connection, b, c)
        assert abs(combined - separate) < 1e-12

    def test_standard_j_squares_to_minus_one(self):
        """Test J² = -1 on 1-forms."""
        grid = Grid(2, 8)
        a = random_one_form(make_rng(1), grid)
        assert (standard_j(standard_j(a)) + a).norm_inf() == 0.0

    def test_positivity_t2(self):
        """Test Ω(a, J a) against the compatible norm and the flat-norm lower bound on T²."""
        grid = Grid(1, 32)
        rng = make_rng(2)
        connection = small_connection(rng, grid)
        for _ in range(5):
            a = random_one_form(rng, grid)
            value = omega_pairing(connection, a, apply_compatible_j(connection, a))
            assert value > 0.0
            assert value == pytest.approx(compatible_norm(connection, a), rel=1e-10)
            assert value >= 0.9 * flat_norm(connection, a)

    def test_positivity_t4(self):
        """Test Ω(a, J_A a) > 0 and the flat-norm lower bound on T⁴."""
        grid = Grid(2, 8)
        rng = make_rng(3)
        connection = small_connection(rng, grid)
        for _ in range(5):
            a = random_one_form(rng, grid)
            value = omega_pairing(connection, a, apply_compatible_j(connection, a))
            assert value > 0.0
            assert value == pytest.approx(compatible_norm(connection, a), rel=0.1)
            assert value >= 0.9 * flat_norm(connection, a)

    @pytest.mark.parametrize("half_dim", [1, 2])
    def test_flat_norm_of_constant(self, half_dim):
        """Test the flat norm of a constant 1-form against the reference volume."""
        grid = Grid(half_dim, 8)
        connection = RelativeConnection.reference(BundleSetup.standard(grid))
        a = DifferentialForm.one_form(grid, [1.0] + [0.5] * (grid.dim - 1))
        expected = 1.0 + 0.25 * (grid.dim - 1)
        assert flat_norm(connection, a) == pytest.approx(expected, rel=1e-14)

    def test_gauge_invariance(self):
        """Test that Ω only depends on the curvature."""
        grid = Grid(2, 8)
        rng = make_rng(4)
        connection = small_connection(rng, grid)
        transform = GaugeTransformation(random_field(rng, grid, 0.1), (1, -2, 0, 3))
        moved = gauge_act(transform, connection)
        a, b = random_one_form(rng, grid), random_one_form(rng, grid)
        expected = omega_pairing(connection, a, b)
        assert omega_pairing(moved, a, b) == pytest.approx(expected, abs=1e-10)


class TestIdentities:
    """Tests for closedness of Ω and the contraction identity."""

    def test_d_omega_vanishes_t4(self):
        """Test the cyclic sum behind dΩ = 0 on T⁴."""
        grid = Grid(2, 16)
        rng = make_rng(5)
        connection = small_connection(rng, grid)
        for _ in range(3):
            a, b, c = (random_one_form(rng, grid, 0.3) for _ in range(3))
            assert d_omega_residual(connection, a, b, c) < 1e-10

    def test_d_omega_trivial_on_t2(self):
        """Test that the cyclic sum has no terms on T²."""
        grid = Grid(1, 8)
        connection = RelativeConnection.reference(BundleSetup.standard(grid))
        a = random_one_form(make_rng(6), grid)
        assert d_omega_residual(connection, a, a, a) == 0.0

    @pytest.mark.parametrize("half_dim,resolution", [(1, 32), (2, 8)])
    def test_contraction_identity(self, half_dim, resolution):
        """Test α(v)βⁿ = n α ∧ ι_vβ ∧ β^{n-1}."""
        grid = Grid(half_dim, resolution)
        rng = make_rng(7)
        beta = curvature(small_connection(rng, grid))
        alpha = random_one_form(rng, grid)
        assert contraction_identity_residual(alpha, beta, random_vector_field(rng, grid)) < 1e-11
