"""Tests for group actions, moment maps and witnesses."""

import numpy as np
import pytest

from momentlab.actions import (
    FibreClass,
    GaugeTransformation,
    InvariantField,
    ProbeRecord,
    fibre_class,
    fibre_pairing,
    gauge_act,
    horizontal_preimage,
    infinitesimal_action,
    moment_identity_residual,
    moment_pairing,
    pair_connection,
    separation_witness,
    tangent_variation,
    theta_pairing,
    theta_pairing_with_primitives,
    translation_flow,
    volume_density,
)
from momentlab.connections import BundleSetup, RelativeConnection, omega_pairing
from momentlab.core import (
    divergence_free_field,
    make_rng,
    random_exact_one_form,
    random_field,
    random_one_form,
    random_vector_field,
)
from momentlab.errors import (
    CurvatureMismatchError,
    DegreeError,
    GridMismatchError,
    IdenticalConnectionsError,
    ProbeError,
    TangencyError,
)
from momentlab.forms import (
    DifferentialForm,
    Grid,
    VectorField,
    exterior_derivative,
    hodge_primitive,
    multi_indices,
)


def small_connection(rng, grid):
    """Random connection close to the reference one."""
    amplitude = 0.02 if grid.half_dim == 1 else 0.005
    return RelativeConnection(BundleSetup.standard(grid), random_one_form(rng, grid, amplitude))


def random_eta(rng, grid):
    """Random Lie-algebra element."""
    return InvariantField(random_vector_field(rng, grid), random_field(rng, grid))


def constant_kahler_form(rng, grid):
    """Standard form plus small constant off-diagonal terms."""
    coefficients = {index: float(rng.uniform(-0.1, 0.1)) for index in multi_indices(grid.dim, 2)}
    for j in range(grid.half_dim):
        coefficients[(2 * j, 2 * j + 1)] += 1.0
    return DifferentialForm.from_components(grid, 2, coefficients)


# ═══════════════════════════════════════════════════════════════════════════════
# Lie-algebra action and moment maps
# ═══════════════════════════════════════════════════════════════════════════════


class TestInfinitesimalAction:
    """Tests for A(η) and ρ_A(η)."""

    def test_pair_vertical(self):
        """Test that a vertical field pairs to its function."""
        grid = Grid(1, 16)
        connection = small_connection(make_rng(0), grid)
        eta = InvariantField.vertical(grid, 0.3)
        assert np.all(pair_connection(connection, eta) == 0.3)

    def test_vertical_action_is_gauge_direction(self):
        """Test ρ_A((0, χ)) = dχ."""
        grid = Grid(1, 16)
        rng = make_rng(1)
        connection = small_connection(rng, grid)
        chi = random_field(rng, grid)
        rho = infinitesimal_action(connection, InvariantField.vertical(grid, chi))
        assert (rho - exterior_derivative(DifferentialForm.scalar(grid, chi))).norm_inf() < 1e-15

    def test_grid_mismatch(self):
        """Test that η and A must share a grid."""
        connection = small_connection(make_rng(2), Grid(1, 16))
        with pytest.raises(GridMismatchError):
            pair_connection(connection, InvariantField.vertical(Grid(1, 8), 1.0))

    def test_translation_flow_derivative(self):
        """Test ρ_A of a constant horizontal field against the finite translation flow."""
        grid = Grid(1, 32)
        rng = make_rng(3)
        connection = small_connection(rng, grid)
        velocity = [0.7, -0.4]
        eta = InvariantField.horizontal(VectorField.from_components(grid, velocity))
        h = 1e-5
        forward = translation_flow(connection, velocity, h).a
        backward = translation_flow(connection, velocity, -h).a
        estimate = (forward - backward) * (1.0 / (2.0 * h))
        assert (estimate - infinitesimal_action(connection, eta)).norm_inf() < 1e-6


class TestMomentMaps:
    """Tests for μ, ν and the moment-map identity."""

    def test_volume_density_of_reference(self):
        """Test ν(A_ref) = 1 on T² and T⁴."""
        for half_dim in (1, 2):
            connection = RelativeConnection.reference(BundleSetup.standard(Grid(half_dim, 8)))
            assert np.allclose(volume_density(connection).density, 1.0, atol=1e-15)

    @pytest.mark.parametrize("half_dim,resolution", [(1, 32), (2, 16)])
    def test_total_volume(self, half_dim, resolution):
        """Test that the constant element pairs to the total volume 1."""
        grid = Grid(half_dim, resolution)
        connection = small_connection(make_rng(4), grid)
        assert moment_pairing(connection, InvariantField.vertical(grid, 1.0)) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_volume_gauge_invariant(self):
        """Test that ν does not change under gauge transformations."""
        grid = Grid(1, 32)
        rng = make_rng(5)
        connection = small_connection(rng, grid)
        moved = gauge_act(GaugeTransformation(random_field(rng, grid, 0.1), (2, -1)), connection)
        assert (volume_density(moved) - volume_density(connection)).norm_inf() < 1e-10

    @pytest.mark.parametrize("half_dim,resolution", [(1, 32), (2, 8)])
    def test_vertical_pairing_gauge_equivariant(self, half_dim, resolution):
        """Test that gauge transformations leave ⟨μ(A), (0, g)⟩ unchanged."""
        grid = Grid(half_dim, resolution)
        rng = make_rng(15)
        connection = small_connection(rng, grid)
        for winding in ((1,) * grid.dim, tuple(range(-1, grid.dim - 1))):
            transform = GaugeTransformation(random_field(rng, grid, 0.1), winding)
            moved = gauge_act(transform, connection)
            eta = InvariantField.vertical(grid, random_field(rng, grid))
            assert abs(moment_pairing(moved, eta) - moment_pairing(connection, eta)) < 1e-12

    def test_identity_on_t2_is_exact(self):
        """Test the identity on T², where the central difference has no truncation error."""
        grid = Grid(1, 32)
        rng = make_rng(6)
        for _ in range(5):
            connection = small_connection(rng, grid)
            b = random_one_form(rng, grid, 0.02)
            check = moment_identity_residual(connection, b, random_eta(rng, grid), 1e-4)
            assert check.residual < 1e-8
            assert not check.resolved
            assert check.order == 2.0

    def test_identity_order_on_t4(self):
        """Test second-order convergence of the central difference on T⁴."""
        grid = Grid(2, 16)
        _, x2, _, x4 = grid.coordinates()
        s = 0.05
        connection = RelativeConnection.reference(BundleSetup.standard(grid))
        b = DifferentialForm.one_form(
            grid, [s * np.sin(2 * np.pi * x2), 0.0, s * np.sin(2 * np.pi * x4), 0.0]
        )
        v = VectorField.from_components(
            grid, [0.5 * np.sin(4 * np.pi * x2) * np.cos(2 * np.pi * x4), 0.0, 0.0, 0.0]
        )
        eps = 1e-2

        check = moment_identity_residual(connection, b, InvariantField.horizontal(v), eps)

        # cubic coefficient of ε ↦ ⟨μ(A + εb), η⟩
        cubic = np.pi**2 * s**3 / 4.0
        assert check.resolved
        assert check.order == pytest.approx(2.0, abs=1e-3)
        assert check.residual == pytest.approx(cubic * eps**2, rel=1e-6)

    def test_probe_leaving_symplectic_set(self):
        """Test that a probe with degenerate curvature raises ProbeError."""
        grid = Grid(1, 16)
        x1, _ = grid.coordinates()
        connection = RelativeConnection.reference(BundleSetup.standard(grid))
        b = DifferentialForm.one_form(grid, [0.0, np.sin(2 * np.pi * x1) / np.pi])
        with pytest.raises(ProbeError) as excinfo:
            moment_identity_residual(connection, b, random_eta(make_rng(7), grid), 1.0)
        assert excinfo.value.margin < 0.0

    def test_gauge_orbits_isotropic(self):
        """Test Ω_A(dχ₁, dχ₂) = 0."""
        grid = Grid(1, 32)
        rng = make_rng(8)
        connection = small_connection(rng, grid)
        for _ in range(5):
            _, first = random_exact_one_form(rng, grid)
            _, second = random_exact_one_form(rng, grid)
            assert abs(omega_pairing(connection, first, second)) < 1e-12


# ═══════════════════════════════════════════════════════════════════════════════
# Gauge group and fibres
# ═══════════════════════════════════════════════════════════════════════════════


class TestFibres:
    """Tests for fibre classes of fixed-curvature connections."""

    def test_winding_shift_is_integral(self):
        """Test that a gauge transformation shifts the class by its winding."""
        grid = Grid(1, 32)
        rng = make_rng(9)
        connection = small_connection(rng, grid)
        transform = GaugeTransformation(random_field(rng, grid, 0.1), (1, -2))
        shift = fibre_class(gauge_act(transform, connection), connection)
        assert list(shift.lift) == pytest.approx([1.0, -2.0], abs=1e-12)
        assert shift.is_integral()

    def test_coefficients_reduce_mod_one(self):
        """Test the representative in [0, 1)."""
        assert FibreClass((0.25, 1.0)).coefficients == (0.25, 0.0)
        assert FibreClass((-0.25,)).coefficients == (0.75,)
        assert not FibreClass((0.5, 0.0)).is_integral()
        assert FibreClass((0.25,)).to_dict() == {"lift": [0.25], "coefficients": [0.25]}

    def test_curvature_mismatch(self):
        """Test that connections of different curvature have no fibre class."""
        grid = Grid(1, 16)
        x1, _ = grid.coordinates()
        base = RelativeConnection.reference(BundleSetup.standard(grid))
        other = base.shifted(DifferentialForm.one_form(grid, [0.0, 0.1 * np.sin(2 * np.pi * x1)]))
        with pytest.raises(CurvatureMismatchError) as excinfo:
            fibre_class(other, base)
        assert excinfo.value.residual > 0.1

    def test_fibre_pairing(self):
        """Test Ω restricted to harmonic forms."""
        bundle = BundleSetup.standard(Grid(2, 8))
        assert fibre_pairing([1, 0, 0, 0], [0, 1, 0, 0], bundle) == pytest.approx(1.0)
        assert fibre_pairing([1, 0, 0, 0], [0, 0, 1, 0], bundle) == pytest.approx(0.0)
        assert fibre_pairing([0, 0, 0, 1], [0, 0, 1, 0], bundle) == pytest.approx(-1.0)

    def test_gauge_composition(self):
        """Test that composing gauge transformations adds phases and windings."""
        grid = Grid(1, 8)
        first = GaugeTransformation(grid.ones(), (1, 0))
        second = GaugeTransformation(2.0 * grid.ones(), (0, 3))
        combined = first + second
        assert combined.winding == (1, 3)
        assert np.all(combined.chi == 3.0)
        assert GaugeTransformation.identity(grid).winding == (0, 0)


# ═══════════════════════════════════════════════════════════════════════════════
# Witnesses and the Θ pairing
# ═══════════════════════════════════════════════════════════════════════════════


class TestWitnesses:
    """Tests for horizontal preimages and separation witnesses."""

    @pytest.mark.parametrize("half_dim,resolution", [(1, 32), (2, 8)])
    def test_preimage_round_trip(self, half_dim, resolution):
        """Test ρ_A(η) = a and A(η) = 0 for the horizontal preimage."""
        grid = Grid(half_dim, resolution)
        rng = make_rng(10)
        connection = small_connection(rng, grid)
        a = random_one_form(rng, grid)
        eta = horizontal_preimage(connection, a)
        assert (infinitesimal_action(connection, eta) - a).norm_inf() < 1e-10
        assert float(np.max(np.abs(pair_connection(connection, eta)))) < 1e-15

    def test_separation(self):
        """Test that the witness vanishes on μ(A′) and is positive on μ(A)."""
        grid = Grid(1, 32)
        rng = make_rng(11)
        first, second = small_connection(rng, grid), small_connection(rng, grid)
        witness = separation_witness(first, second)
        assert witness.gap > 0.0
        assert moment_pairing(second, witness.field) == pytest.approx(0.0, abs=1e-15)
        assert witness.gap == pytest.approx(moment_pairing(first, witness.field))

    def test_identical_connections(self):
        """Test that identical connections cannot be separated."""
        grid = Grid(1, 16)
        connection = small_connection(make_rng(12), grid)
        with pytest.raises(IdenticalConnectionsError):
            separation_witness(connection, connection)


class TestThetaPairing:
    """Tests for Θ on the fixed-volume space."""

    def test_undefined_on_t2(self):
        """Test that Θ needs T⁴."""
        grid = Grid(1, 8)
        omega = BundleSetup.standard(grid).reference_curvature
        zero = DifferentialForm.zero(grid, 2)
        with pytest.raises(DegreeError):
            theta_pairing(omega, zero, zero)

    def test_rejects_non_tangent(self):
        """Test that a variation changing the volume is rejected."""
        grid = Grid(2, 8)
        omega = BundleSetup.standard(grid).reference_curvature
        x1, _, _, _ = grid.coordinates()
        a = DifferentialForm.one_form(grid, [0.0, 0.1 * np.sin(2 * np.pi * x1), 0.0, 0.0])
        gamma = exterior_derivative(a)
        with pytest.raises(TangencyError):
            theta_pairing(omega, gamma, gamma)

    def test_antisymmetry(self):
        """Test Θ(γ, γ′) = -Θ(γ′, γ)."""
        grid = Grid(2, 8)
        rng = make_rng(13)
        omega = constant_kahler_form(rng, grid)
        gamma = tangent_variation(omega, divergence_free_field(rng, grid, 0.1))
        gamma_prime = tangent_variation(omega, divergence_free_field(rng, grid, 0.1))
        forward = theta_pairing(omega, gamma, gamma_prime)
        assert forward == pytest.approx(-theta_pairing(omega, gamma_prime, gamma), abs=1e-12)

    def test_independent_of_primitive(self):
        """Test that shifting a primitive by an exact form leaves Θ unchanged."""
        grid = Grid(2, 8)
        rng = make_rng(14)
        omega = constant_kahler_form(rng, grid)
        a = hodge_primitive(tangent_variation(omega, divergence_free_field(rng, grid, 0.1)))
        a_prime = hodge_primitive(tangent_variation(omega, divergence_free_field(rng, grid, 0.1)))
        shift = exterior_derivative(DifferentialForm.scalar(grid, random_field(rng, grid)))
        moved = theta_pairing_with_primitives(omega, a + shift, a_prime)
        assert moved == pytest.approx(theta_pairing_with_primitives(omega, a, a_prime), abs=1e-10)


class TestProbeRecord:
    """Tests for ProbeRecord."""

    def test_to_dict(self):
        """Test the JSON shape of a probe record."""
        record = ProbeRecord("moment_identity[0]", "abc", 1e-12, None, 0.9)
        assert record.to_dict() == {
            "name": "moment_identity[0]",
            "inputs_hash": "abc",
            "residual": 1e-12,
            "order": None,
            "margin": 0.9,
        }
