"""
MomentLab Verify Suite - Deterministic checks of every identity the library relies on.

The quick level checks T² (plus the Hopf bundle); the full level adds the
same families on T⁴ together with the checks that only exist there
(closedness of Ω, the Θ pairing). Every check draws its inputs from its own
named PCG64 stream, so verdicts do not depend on check order.
"""

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, Optional, Tuple

import numpy as np

from momentlab.actions import (
    GaugeTransformation,
    InvariantField,
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
from momentlab.connections import (
    BundleSetup,
    RelativeConnection,
    apply_compatible_j,
    compatible_norm,
    contraction_identity_residual,
    curvature,
    d_omega_residual,
    flat_norm,
    omega_pairing,
)
from momentlab.core.sampling import (
    divergence_free_field,
    random_exact_one_form,
    random_field,
    random_one_form,
    random_vector_field,
    stream_rng,
)
from momentlab.errors import ConfigError
from momentlab.forms import (
    DifferentialForm,
    Grid,
    VectorField,
    codifferential,
    exterior_derivative,
    hodge_primitive,
    integrate,
    multi_indices,
    spectral_derivative,
    wedge,
)
from momentlab.holonomy import (
    LoopSpec,
    hamiltonian_residual,
    hopf_projection,
    plaquette_residual,
    rotation_hamiltonian,
    weinstein_hom,
)
from momentlab.holonomy.hopf import horizontal_basis, random_points
from momentlab.holonomy.weinstein import MIN_SUBSTEPS_PER_TURN, expected_shift_factor
from momentlab.kahler import (
    FlowResult,
    KahlerPotential,
    VolumeSpec,
    complex_gauge_act,
    kahler_form,
    kempf_ness_field,
    kn_gradient,
    linear_oracle,
    potential_inner_product,
    run_flow,
)
from momentlab.validation.config import ToleranceConfig
from momentlab.workflows.engine import CheckRunner, Measurement, RunReport

logger = logging.getLogger(__name__)

LEVELS = ("quick", "full")
T2_RESOLUTION = 64
T4_RESOLUTION = 16
QUICK_FLOW_RESOLUTION = 32
FULL_FLOW_RESOLUTION = 64

CONNECTION_AMPLITUDE = {1: 0.02, 2: 0.005}
POTENTIAL_AMPLITUDE = {1: 0.005, 2: 0.002}
POSITIVITY_RELATIVE = {1: 1e-10, 2: 0.1}
POSITIVITY_FLAT_FLOOR = 0.9
EXACT_TOLERANCE = 1e-12
ANTISYMMETRY_TOLERANCE = 1e-13
CONVEXITY_FLOOR = 1e-10
CONVEXITY_RELATIVE = 1e-8
ENERGY_TOLERANCE = 1e-12
PLAQUETTE_TOLERANCE = 1e-8
TRANSLATION_STEP = 1e-4
TRANSLATION_TOLERANCE = 1e-6
GRADIENT_STEP = 1e-3
ORDER_WINDOW = (1.8, 2.2)
ORDER_AMPLITUDE = 0.05
ORDER_STEP = 1e-2
T4_MOMENT_PROBES = 5
PAIR_COUNT = 20
POSITIVITY_COUNT = 50
THETA_PAIRS = 5
HOLONOMY_SAMPLES = 16
FLOW_THETA_AMPLITUDE = 0.3


@dataclass
class SuiteContext:
    """Inputs shared by the checks of one suite run."""

    seed: int
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    probes: int = 20
    epsilon: float = 1e-4
    flow_resolution: int = QUICK_FLOW_RESOLUTION
    second_start_amplitude: float = 0.02
    workers: Optional[int] = None
    _flows: Optional[Tuple[KahlerPotential, FlowResult, FlowResult]] = field(
        default=None, init=False, repr=False
    )

    def rng(self, stream: str) -> np.random.Generator:
        return stream_rng(self.seed, stream)


def _label(grid: Grid) -> str:
    return f"t{grid.dim}"


def _random_connection(rng: np.random.Generator, grid: Grid) -> RelativeConnection:
    return RelativeConnection(
        BundleSetup.standard(grid), random_one_form(rng, grid, CONNECTION_AMPLITUDE[grid.half_dim])
    )


def _random_eta(rng: np.random.Generator, grid: Grid) -> InvariantField:
    return InvariantField(random_vector_field(rng, grid), random_field(rng, grid))


def _random_gauge(rng: np.random.Generator, grid: Grid) -> GaugeTransformation:
    winding = tuple(int(k) for k in rng.integers(-3, 4, size=grid.dim))
    return GaugeTransformation(random_field(rng, grid, 0.1), winding)


def cosine_theta(grid: Grid, amplitude: float = FLOW_THETA_AMPLITUDE) -> VolumeSpec:
    """θ = 1 + amplitude·cos 2πx₁."""
    values = 1.0 + amplitude * np.cos(2.0 * np.pi * grid.coordinates()[0])
    return VolumeSpec.normalized(grid, values)


# ── Forms ─────────────────────────────────────────────────────────────────


def check_dd_zero(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/dd_zero")
    f = DifferentialForm.scalar(grid, random_field(rng, grid, 0.1))
    residual = exterior_derivative(exterior_derivative(f)).norm_inf()
    if grid.dim > 2:
        a = random_one_form(rng, grid, 0.1)
        residual = max(residual, exterior_derivative(exterior_derivative(a)).norm_inf())
    return residual


def check_leibniz(ctx: SuiteContext, grid: Grid) -> float:
    """d(α∧β) = dα∧β + (-1)^p α∧dβ with deg α∧β below the top degree."""
    rng = ctx.rng(f"{_label(grid)}/leibniz")
    if grid.half_dim == 1:
        alpha = DifferentialForm.scalar(grid, random_field(rng, grid, 0.1))
    else:
        alpha = random_one_form(rng, grid, 0.1, constant=False)
    beta = random_one_form(rng, grid, 0.1)
    left = exterior_derivative(wedge(alpha, beta))
    right = wedge(exterior_derivative(alpha), beta) + wedge(alpha, exterior_derivative(beta)) * (
        (-1.0) ** alpha.degree
    )
    return (left - right).norm_inf()


def check_stokes(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/stokes")
    degree = grid.dim - 1
    form = DifferentialForm.from_components(
        grid, degree, {index: random_field(rng, grid) for index in multi_indices(grid.dim, degree)}
    )
    return abs(integrate(exterior_derivative(form)))


def check_hodge_primitive(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/hodge_primitive")
    target = exterior_derivative(random_one_form(rng, grid, 0.1, constant=False))
    primitive = hodge_primitive(target)
    return max(
        (exterior_derivative(primitive) - target).norm_inf(),
        codifferential(primitive).norm_inf(),
    )


# ── Connection space ──────────────────────────────────────────────────────


def check_bilinearity(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/bilinearity")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(PAIR_COUNT):
        a, b, c = (random_one_form(rng, grid) for _ in range(3))
        s, t = (float(x) for x in rng.uniform(-2.0, 2.0, size=2))
        combined = omega_pairing(connection, a * s + b * t, c)
        separate = s * omega_pairing(connection, a, c) + t * omega_pairing(connection, b, c)
        worst = max(worst, abs(combined - separate))
    return worst


def check_antisymmetry(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/antisymmetry")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(PAIR_COUNT):
        a, b = random_one_form(rng, grid), random_one_form(rng, grid)
        worst = max(worst, abs(omega_pairing(connection, a, b) + omega_pairing(connection, b, a)))
    return worst


def check_positivity(ctx: SuiteContext, grid: Grid) -> Measurement:
    """
    Ω_A(a, J_A a) agrees with the g_A norm and stays above 0.9 of the flat norm.

    The residual is the relative gap to the g_A norm; the flat ratio gates holds.
    """
    rng = ctx.rng(f"{_label(grid)}/positivity")
    connection = _random_connection(rng, grid)
    worst = 0.0
    smallest = np.inf
    lowest_ratio = np.inf
    for _ in range(POSITIVITY_COUNT):
        a = random_one_form(rng, grid)
        value = omega_pairing(connection, a, apply_compatible_j(connection, a))
        expected = compatible_norm(connection, a)
        smallest = min(smallest, value)
        lowest_ratio = min(lowest_ratio, value / flat_norm(connection, a))
        worst = max(worst, abs(value - expected) / expected)
    holds = bool(smallest > 0.0 and lowest_ratio >= POSITIVITY_FLAT_FLOOR)
    detail = f"min Ω_A(a, J_A a) = {smallest:.6e}, min ratio to flat norm = {lowest_ratio:.4f}"
    return Measurement(worst, holds, detail)


def check_gauge_invariance(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/gauge_invariance")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(PAIR_COUNT):
        moved = gauge_act(_random_gauge(rng, grid), connection)
        a, b = random_one_form(rng, grid), random_one_form(rng, grid)
        worst = max(worst, abs(omega_pairing(moved, a, b) - omega_pairing(connection, a, b)))
    return worst


def check_contraction_identity(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/contraction")
    beta = curvature(_random_connection(rng, grid))
    worst = 0.0
    for _ in range(PAIR_COUNT):
        alpha = random_one_form(rng, grid)
        v = random_vector_field(rng, grid)
        worst = max(worst, contraction_identity_residual(alpha, beta, v))
    return worst


def check_d_omega(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/d_omega")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(PAIR_COUNT):
        a, b, c = (random_one_form(rng, grid, 0.3) for _ in range(3))
        worst = max(worst, d_omega_residual(connection, a, b, c))
    return worst


# ── Group actions and witnesses ───────────────────────────────────────────


def check_moment_identity(ctx: SuiteContext, grid: Grid, count: int) -> Measurement:
    rng = ctx.rng(f"{_label(grid)}/moment_identity")
    amplitude = CONNECTION_AMPLITUDE[grid.half_dim]
    worst = 0.0
    orders = []
    unresolved = 0
    for _ in range(count):
        connection = _random_connection(rng, grid)
        b = random_one_form(rng, grid, amplitude)
        check = moment_identity_residual(connection, b, _random_eta(rng, grid), ctx.epsilon)
        worst = max(worst, check.residual)
        if check.resolved:
            orders.append(check.order)
        else:
            unresolved += 1
    low, high = ORDER_WINDOW
    in_window = all(low <= order <= high for order in orders)
    if orders:
        detail = (
            f"{len(orders)} orders in [{min(orders):.3f}, {max(orders):.3f}], "
            f"{unresolved} at rounding floor"
        )
    else:
        detail = f"all {unresolved} probes at rounding floor"
    return Measurement(worst, in_window, detail)


def check_moment_order(ctx: SuiteContext, grid: Grid) -> Measurement:
    """
    Convergence order of the identity on a direction whose cubic term clears rounding.

    With b = s(sin 2πx₂, 0, sin 2πx₄, 0) at the reference connection the
    moment is cubic in ε, so the central difference error is exactly
    quadratic. The residual is the distance of the measured order from 2.
    """
    _, x2, _, x4 = grid.coordinates()
    s = ORDER_AMPLITUDE
    connection = RelativeConnection.reference(BundleSetup.standard(grid))
    b = DifferentialForm.one_form(
        grid, [s * np.sin(2 * np.pi * x2), 0.0, s * np.sin(2 * np.pi * x4), 0.0]
    )
    v = VectorField.from_components(
        grid, [0.5 * np.sin(4 * np.pi * x2) * np.cos(2 * np.pi * x4), 0.0, 0.0, 0.0]
    )
    check = moment_identity_residual(connection, b, InvariantField.horizontal(v), ORDER_STEP)
    low, high = ORDER_WINDOW
    holds = bool(check.resolved and low <= check.order <= high)
    detail = f"order {check.order:.4f}, error {check.residual:.3e}, resolved={check.resolved}"
    return Measurement(abs(check.order - 2.0), holds, detail)


def check_isotropy(ctx: SuiteContext, grid: Grid) -> float:
    """Gauge orbits are isotropic: Ω_A(dχ₁, dχ₂) = 0."""
    rng = ctx.rng(f"{_label(grid)}/isotropy")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(PAIR_COUNT):
        _, first = random_exact_one_form(rng, grid)
        _, second = random_exact_one_form(rng, grid)
        worst = max(worst, abs(omega_pairing(connection, first, second)))
    return worst


def check_fibre_restriction(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/fibre_restriction")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(PAIR_COUNT):
        alpha, beta = rng.normal(size=grid.dim), rng.normal(size=grid.dim)
        restricted = omega_pairing(
            connection,
            DifferentialForm.one_form(grid, [float(x) for x in alpha]),
            DifferentialForm.one_form(grid, [float(x) for x in beta]),
        )
        worst = max(worst, abs(restricted - fibre_pairing(alpha, beta, connection.bundle)))
    return worst


def check_winding_shift(ctx: SuiteContext, grid: Grid) -> Measurement:
    rng = ctx.rng(f"{_label(grid)}/winding_shift")
    connection = _random_connection(rng, grid)
    worst = 0.0
    integral = True
    for _ in range(PAIR_COUNT):
        transform = _random_gauge(rng, grid)
        shift = fibre_class(gauge_act(transform, connection), connection)
        offset = np.asarray(shift.lift) - np.asarray(transform.winding)
        worst = max(worst, float(np.max(np.abs(offset))))
        integral = integral and shift.is_integral()
    detail = "fibre classes reduce to zero" if integral else "non-integral shift"
    return Measurement(worst, integral, detail)


def check_volume_gauge_invariance(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/volume_gauge")
    connection = _random_connection(rng, grid)
    moved = gauge_act(_random_gauge(rng, grid), connection)
    return (volume_density(moved) - volume_density(connection)).norm_inf()


def check_gauge_equivariance(ctx: SuiteContext, grid: Grid) -> float:
    """⟨μ(f·A), (0, g)⟩ = ⟨μ(A), (0, g)⟩."""
    rng = ctx.rng(f"{_label(grid)}/gauge_equivariance")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(THETA_PAIRS):
        moved = gauge_act(_random_gauge(rng, grid), connection)
        eta = InvariantField.vertical(grid, random_field(rng, grid))
        worst = max(worst, abs(moment_pairing(moved, eta) - moment_pairing(connection, eta)))
    return worst


def check_preimage_roundtrip(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/preimage")
    connection = _random_connection(rng, grid)
    worst = 0.0
    for _ in range(THETA_PAIRS):
        a = random_one_form(rng, grid)
        eta = horizontal_preimage(connection, a)
        worst = max(
            worst,
            (infinitesimal_action(connection, eta) - a).norm_inf(),
            float(np.max(np.abs(pair_connection(connection, eta)))),
        )
    return worst


def check_separation(ctx: SuiteContext, grid: Grid) -> Measurement:
    """The witness vanishes on μ(A′) and is positive on μ(A)."""
    rng = ctx.rng(f"{_label(grid)}/separation")
    worst = 0.0
    smallest = np.inf
    for _ in range(PAIR_COUNT):
        first, second = _random_connection(rng, grid), _random_connection(rng, grid)
        witness = separation_witness(first, second)
        smallest = min(smallest, witness.gap)
        worst = max(worst, abs(moment_pairing(second, witness.field)))
    return Measurement(worst, bool(smallest > 0.0), f"min gap = {smallest:.6e}")


def check_translation_oracle(ctx: SuiteContext, grid: Grid) -> float:
    """ρ_A of a constant horizontal field against the finite translation flow."""
    rng = ctx.rng(f"{_label(grid)}/translation")
    connection = _random_connection(rng, grid)
    velocity = [float(x) for x in rng.uniform(-1.0, 1.0, size=grid.dim)]
    eta = InvariantField.horizontal(VectorField.from_components(grid, velocity))
    h = TRANSLATION_STEP
    forward = translation_flow(connection, velocity, h).a
    backward = translation_flow(connection, velocity, -h).a
    estimate = (forward - backward) * (1.0 / (2.0 * h))
    return (estimate - infinitesimal_action(connection, eta)).norm_inf()


def _constant_kahler_form(rng: np.random.Generator, grid: Grid) -> DifferentialForm:
    coefficients = {index: float(rng.uniform(-0.1, 0.1)) for index in multi_indices(grid.dim, 2)}
    for j in range(grid.half_dim):
        coefficients[(2 * j, 2 * j + 1)] += 1.0
    return DifferentialForm.from_components(grid, 2, coefficients)


def check_theta_antisymmetry(ctx: SuiteContext, grid: Grid) -> float:
    rng = ctx.rng(f"{_label(grid)}/theta_antisymmetry")
    omega = _constant_kahler_form(rng, grid)
    worst = 0.0
    for _ in range(THETA_PAIRS):
        gamma = tangent_variation(omega, divergence_free_field(rng, grid, 0.1))
        gamma_prime = tangent_variation(omega, divergence_free_field(rng, grid, 0.1))
        symmetric_part = theta_pairing(omega, gamma, gamma_prime) + theta_pairing(
            omega, gamma_prime, gamma
        )
        worst = max(worst, abs(symmetric_part))
    return worst


def check_theta_shift(ctx: SuiteContext, grid: Grid) -> float:
    """Θ does not see the choice of primitive: a ↦ a + df."""
    rng = ctx.rng(f"{_label(grid)}/theta_shift")
    omega = _constant_kahler_form(rng, grid)
    worst = 0.0
    for _ in range(THETA_PAIRS):
        a = hodge_primitive(tangent_variation(omega, divergence_free_field(rng, grid, 0.1)))
        a_prime = hodge_primitive(tangent_variation(omega, divergence_free_field(rng, grid, 0.1)))
        shift = exterior_derivative(DifferentialForm.scalar(grid, random_field(rng, grid)))
        moved = theta_pairing_with_primitives(omega, a + shift, a_prime)
        worst = max(worst, abs(moved - theta_pairing_with_primitives(omega, a, a_prime)))
    return worst


# ── Kähler potentials and the volume flow ─────────────────────────────────


def check_complex_gauge(ctx: SuiteContext, grid: Grid) -> Measurement:
    rng = ctx.rng(f"{_label(grid)}/complex_gauge")
    connection = _random_connection(rng, grid)
    phi = random_field(rng, grid, POTENTIAL_AMPLITUDE[grid.half_dim])
    moved = complex_gauge_act(phi, connection)
    residual = (curvature(moved) - kahler_form(phi, curvature(connection))).norm_inf()
    transform = _random_gauge(rng, grid)
    unitary = complex_gauge_act(grid.zeros(), connection, unitary=transform)
    branch = (unitary.a - gauge_act(transform, connection).a).norm_inf()
    return Measurement(
        residual, branch <= EXACT_TOLERANCE, f"unitary branch residual = {branch:.3e}"
    )


def check_convexity(ctx: SuiteContext, grid: Grid) -> Measurement:
    """
    Second differences of F along affine lines.

    On T² F is quadratic and the second difference equals (1/4π)∫|dψ|²;
    on T⁴ it must be non-negative.
    """
    rng = ctx.rng(f"{_label(grid)}/convexity")
    omega = BundleSetup.standard(grid).reference_curvature
    theta = cosine_theta(grid)
    amplitude = POTENTIAL_AMPLITUDE[grid.half_dim]
    worst = 0.0
    lowest = np.inf
    for _ in range(PAIR_COUNT):
        phi = random_field(rng, grid, amplitude)
        psi = random_field(rng, grid, amplitude)
        left, centre, right = (
            kempf_ness_field(phi + s * psi, omega, theta) for s in (-1.0, 0.0, 1.0)
        )
        second = left + right - 2.0 * centre
        lowest = min(lowest, second)
        if grid.half_dim == 1:
            dirichlet = sum(
                float(np.mean(spectral_derivative(psi, axis) ** 2)) for axis in range(grid.dim)
            )
            expected = dirichlet / (4.0 * np.pi)
            worst = max(worst, abs(second - expected) / expected)
    if grid.half_dim == 1:
        return Measurement(worst, bool(lowest > 0.0), f"min second difference = {lowest:.6e}")
    return Measurement(max(0.0, -lowest), True, f"min second difference = {lowest:.6e}")


def check_kn_gradient(ctx: SuiteContext, grid: Grid) -> float:
    """Directional derivative of F against ⟨grad F, ψ⟩_θ."""
    rng = ctx.rng(f"{_label(grid)}/kn_gradient")
    omega = BundleSetup.standard(grid).reference_curvature
    theta = cosine_theta(grid)
    amplitude = POTENTIAL_AMPLITUDE[grid.half_dim]
    worst = 0.0
    for _ in range(THETA_PAIRS):
        phi = random_field(rng, grid, amplitude)
        psi = random_field(rng, grid, amplitude)
        h = GRADIENT_STEP
        forward = kempf_ness_field(phi + h * psi, omega, theta)
        backward = kempf_ness_field(phi - h * psi, omega, theta)
        slope = (forward - backward) / (2.0 * h)
        gradient = kn_gradient(KahlerPotential.create(phi, omega), theta)
        worst = max(worst, abs(slope - potential_inner_product(gradient, psi, theta)))
    return worst


def _flow_runs(ctx: SuiteContext) -> Tuple[KahlerPotential, FlowResult, FlowResult]:
    """Oracle and two flows to the cosine θ on T², computed once per suite."""
    if ctx._flows is None:
        grid = Grid(1, ctx.flow_resolution)
        omega = BundleSetup.standard(grid).reference_curvature
        theta = cosine_theta(grid)
        tol = ctx.tolerances.residual
        first = run_flow(theta, KahlerPotential.zero(omega), tol=tol)
        start = random_field(ctx.rng("t2/flow_second_start"), grid, ctx.second_start_amplitude)
        second = run_flow(theta, KahlerPotential.create(start, omega), tol=tol)
        ctx._flows = (linear_oracle(theta, omega), first, second)
    return ctx._flows


def check_flow_oracle(ctx: SuiteContext) -> Measurement:
    oracle, first, _ = _flow_runs(ctx)
    error = float(np.max(np.abs(first.potential.phi - oracle.phi)))
    return Measurement(
        error,
        first.final.residual < ctx.tolerances.residual,
        f"t = {first.final.t:.4f}, {first.final.step} steps, residual {first.final.residual:.3e}",
    )


def check_flow_energy(ctx: SuiteContext) -> Measurement:
    _, first, second = _flow_runs(ctx)
    increase = 0.0
    for result in (first, second):
        energies = np.array([record.F for record in result.trace])
        if len(energies) > 1:
            increase = max(increase, float(np.max(np.diff(energies))))
    return Measurement(max(0.0, increase), True, f"largest per-step change in F = {increase:.3e}")


def check_flow_uniqueness(ctx: SuiteContext) -> float:
    _, first, second = _flow_runs(ctx)
    return float(np.max(np.abs(first.potential.phi - second.potential.phi)))


# ── Hopf bundle and holonomy ──────────────────────────────────────────────


def check_plaquette(ctx: SuiteContext) -> float:
    rng = ctx.rng("s2/plaquette")
    z = random_points(rng, HOLONOMY_SAMPLES)
    e1, e2 = horizontal_basis(z)
    tangent = [e1, e2, 1j * z]
    weights = rng.normal(size=(2, 3, HOLONOMY_SAMPLES, 1))
    u = sum(weights[0, k] * tangent[k] for k in range(3))
    w = sum(weights[1, k] * tangent[k] for k in range(3))
    return plaquette_residual(z, u, w)


def check_hamiltonian(ctx: SuiteContext) -> float:
    rng = ctx.rng("s2/hamiltonian")
    points = hopf_projection(random_points(rng, 2 * HOLONOMY_SAMPLES))
    tangents = np.cross(points, rng.normal(size=points.shape))
    rotation = rotation_hamiltonian(tuple(float(x) for x in rng.normal(size=3)))
    return hamiltonian_residual(rotation, points, tangents)


def check_weinstein(ctx: SuiteContext, loop: LoopSpec, expected: complex) -> Measurement:
    result = weinstein_hom(loop, samples=HOLONOMY_SAMPLES, seed=ctx.seed, workers=ctx.workers)
    return Measurement(
        abs(result.phase - expected),
        result.sample_variance <= ctx.tolerances.variance,
        f"λ = {result.phase.real:.9f}{result.phase.imag:+.9f}i, "
        f"variance {result.sample_variance:.3e}",
    )


def _holonomy_loops(ctx: SuiteContext) -> Dict[str, Tuple[LoopSpec, complex]]:
    steps = MIN_SUBSTEPS_PER_TURN
    axis = tuple(float(x) for x in ctx.rng("s2/axis").normal(size=3))
    shift = 0.25
    return {
        "single_turn": (LoopSpec.rotation((0.0, 0.0, 1.0), 1, steps), complex(-1.0, 0.0)),
        "double_turn": (LoopSpec.rotation((0.0, 0.0, 1.0), 2, 2 * steps), complex(1.0, 0.0)),
        "random_axis": (LoopSpec.rotation(axis, 1, steps), complex(-1.0, 0.0)),
        "hamiltonian_shift": (
            LoopSpec.rotation((0.0, 0.0, 1.0), 1, steps, hamiltonian_shift=shift),
            -expected_shift_factor(shift, 1),
        ),
        "concatenation": (
            LoopSpec.rotation((0.0, 0.0, 1.0), 1, steps).then(
                LoopSpec.rotation((1.0, 0.0, 0.0), 1, steps)
            ),
            complex(1.0, 0.0),
        ),
    }


# ── Suite assembly ────────────────────────────────────────────────────────


def _register_torus(runner: CheckRunner, ctx: SuiteContext, grid: Grid, moment_probes: int) -> None:
    tol = ctx.tolerances
    label = _label(grid)
    checks = [
        ("forms.dd_zero", EXACT_TOLERANCE, check_dd_zero),
        ("forms.leibniz", tol.identity, check_leibniz),
        ("forms.stokes", EXACT_TOLERANCE, check_stokes),
        ("forms.hodge_primitive", tol.identity, check_hodge_primitive),
        ("connection.bilinearity", EXACT_TOLERANCE, check_bilinearity),
        ("connection.antisymmetry", ANTISYMMETRY_TOLERANCE, check_antisymmetry),
        ("connection.positivity", POSITIVITY_RELATIVE[grid.half_dim], check_positivity),
        ("connection.gauge_invariance", EXACT_TOLERANCE, check_gauge_invariance),
        ("connection.contraction_identity", EXACT_TOLERANCE, check_contraction_identity),
        ("actions.isotropy", tol.identity, check_isotropy),
        ("actions.fibre_restriction", EXACT_TOLERANCE, check_fibre_restriction),
        ("actions.winding_shift", EXACT_TOLERANCE, check_winding_shift),
        ("actions.volume_gauge_invariance", tol.identity, check_volume_gauge_invariance),
        ("actions.gauge_equivariance", EXACT_TOLERANCE, check_gauge_equivariance),
        ("actions.preimage_roundtrip", tol.identity, check_preimage_roundtrip),
        ("actions.separation", EXACT_TOLERANCE, check_separation),
        ("actions.translation_oracle", TRANSLATION_TOLERANCE, check_translation_oracle),
        ("kahler.complex_gauge", tol.identity, check_complex_gauge),
        ("kahler.kn_gradient", tol.identity, check_kn_gradient),
    ]
    for name, tolerance, check in checks:
        runner.register(f"{label}.{name}", tolerance, partial(check, ctx, grid))
    runner.register(
        f"{label}.actions.moment_identity",
        tol.moment,
        partial(check_moment_identity, ctx, grid, moment_probes),
    )
    convexity_tolerance = CONVEXITY_RELATIVE if grid.half_dim == 1 else CONVEXITY_FLOOR
    runner.register(
        f"{label}.kahler.convexity", convexity_tolerance, partial(check_convexity, ctx, grid)
    )
    if grid.half_dim > 1:
        t4_checks = [
            ("connection.d_omega", check_d_omega),
            ("actions.theta_antisymmetry", check_theta_antisymmetry),
            ("actions.theta_shift", check_theta_shift),
        ]
        for name, check in t4_checks:
            runner.register(f"{label}.{name}", tol.identity, partial(check, ctx, grid))
        order_tolerance = ORDER_WINDOW[1] - 2.0
        runner.register(
            f"{label}.actions.moment_order", order_tolerance, partial(check_moment_order, ctx, grid)
        )


def build_runner(ctx: SuiteContext, level: str = "quick") -> CheckRunner:
    """
    Assemble the checks of a verify level.

    Raises:
        ConfigError: for an unknown level.
    """
    if level not in LEVELS:
        raise ConfigError(f"unknown verify level {level!r}; choose one of {', '.join(LEVELS)}")
    tol = ctx.tolerances
    runner = CheckRunner()
    _register_torus(runner, ctx, Grid(1, T2_RESOLUTION), ctx.probes)

    runner.register("t2.flow.oracle", tol.oracle, partial(check_flow_oracle, ctx))
    runner.register("t2.flow.energy_monotone", ENERGY_TOLERANCE, partial(check_flow_energy, ctx))
    runner.register("t2.flow.uniqueness", tol.uniqueness, partial(check_flow_uniqueness, ctx))

    runner.register("s2.holonomy.plaquette", PLAQUETTE_TOLERANCE, partial(check_plaquette, ctx))
    runner.register("s2.holonomy.hamiltonian", tol.identity, partial(check_hamiltonian, ctx))
    for name, (loop, expected) in _holonomy_loops(ctx).items():
        runner.register(
            f"s2.holonomy.{name}", tol.holonomy, partial(check_weinstein, ctx, loop, expected)
        )

    if level == "full":
        _register_torus(runner, ctx, Grid(2, T4_RESOLUTION), T4_MOMENT_PROBES)
    return runner


def verify_suite(
    seed: int,
    level: str = "quick",
    tolerances: Optional[ToleranceConfig] = None,
    probes: int = 20,
    epsilon: float = 1e-4,
    workers: Optional[int] = None,
) -> RunReport:
    """
    Run the deterministic verification suite.

    Args:
        seed: Seed of every random draw.
        level: ``quick`` (T² and S²) or ``full`` (adds T⁴).
        tolerances: Acceptance tolerances; defaults when None.
        probes: Moment-identity probes on T².
        epsilon: Finite-difference step of the moment identity.
        workers: Holonomy thread count; MOMENTLAB_THREADS when None.

    Returns:
        RunReport with one record per check.

    Example:
        >>> report = verify_suite(seed=42, level="quick")
        >>> report.passed
        True
    """
    ctx = SuiteContext(
        seed=seed,
        tolerances=tolerances or ToleranceConfig(),
        probes=probes,
        epsilon=epsilon,
        flow_resolution=FULL_FLOW_RESOLUTION if level == "full" else QUICK_FLOW_RESOLUTION,
        workers=workers,
    )
    runner = build_runner(ctx, level)
    logger.info("verify suite: level=%s seed=%d checks=%d", level, seed, len(runner.names))
    return runner.run(RunReport(kind="verify", seed=seed, level=level))
