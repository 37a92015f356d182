"""
MomentLab Experiments - Dispatch of configured runs to the owning modules.

run_experiment takes a validated ExperimentConfig, runs the experiment it
names and writes its artifacts through an ArtifactStore:

    verify        report.json
    flow          trace.csv, phi.f64 (+ sidecar), report.json
    weinstein     holonomy.json, report.json
    moment-check  probes.json, report.json

Every run also writes config.json (the effective configuration) and
timings.json (wall-clock data, outside the reproducibility contract).
"""

import hashlib
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from momentlab.actions import InvariantField, ProbeRecord, moment_identity_residual
from momentlab.connections import BundleSetup, RelativeConnection, curvature, is_symplectic
from momentlab.core.sampling import make_rng, random_field, random_one_form, random_vector_field
from momentlab.errors import (
    ConfigError,
    FlowConvergenceError,
    HolonomyError,
    MomentLabError,
)
from momentlab.forms import DifferentialForm, Grid, read_form
from momentlab.holonomy import LoopSpec, weinstein_hom
from momentlab.holonomy.weinstein import expected_shift_factor
from momentlab.kahler import (
    FlowRecord,
    FlowResult,
    FlowState,
    KahlerPotential,
    VolumeSpec,
    initial_state,
    linear_oracle,
    run_flow,
    stability_bound,
)
from momentlab.state.store import TIMINGS_FILE, ArtifactStore, FlowCheckpoint
from momentlab.validation.config import ExperimentConfig, ThetaConfig
from momentlab.workflows.engine import CheckRecord, CheckStatus, Measurement, RunReport, evaluate
from momentlab.workflows.suite import ENERGY_TOLERANCE, ORDER_WINDOW, verify_suite

logger = logging.getLogger(__name__)

TRACE_FILE = "trace.csv"
TRACE_COLUMNS = ["step", "t", "F", "residual_linf", "margin", "wall_ms"]
FIELD_FILE = "phi.f64"
HOLONOMY_FILE = "holonomy.json"
PROBES_FILE = "probes.json"
REPORT_FILE = "report.json"
CONFIG_FILE = "config.json"


# ── θ presets ─────────────────────────────────────────────────────────────


def build_theta(config: ThetaConfig, grid: Grid) -> VolumeSpec:
    """
    Prescribed volume for a flow experiment.

    Raises:
        ConfigError: if a mode does not fit the grid, the field file is
            unusable, or θ is not positive.
    """
    if config.preset == "flat":
        return VolumeSpec.flat(grid)
    if config.preset == "cosine":
        coords = grid.coordinates()
        values = grid.ones()
        for mode in config.modes:
            if mode.axis >= grid.dim:
                raise ConfigError(f"θ mode axis {mode.axis} does not exist on a {grid.dim}-torus")
            if 2 * mode.frequency >= grid.resolution:
                raise ConfigError(
                    f"θ mode frequency {mode.frequency} is not resolved at N={grid.resolution}"
                )
            wave = np.cos(2.0 * np.pi * mode.frequency * coords[mode.axis])
            values = values + mode.amplitude * wave
        return VolumeSpec.normalized(grid, values)

    try:
        form = read_form(str(config.path))
    except (OSError, ValueError, KeyError, MomentLabError) as e:
        raise ConfigError(f"cannot read θ field from {config.path}: {e}")
    if form.degree != 0 or form.grid != grid:
        raise ConfigError(
            f"θ field must be a 0-form on {grid}, got degree {form.degree} on {form.grid}"
        )
    try:
        return VolumeSpec.normalized(grid, form.values)
    except ValueError as e:
        raise ConfigError(f"θ field from {config.path} is not a volume: {e}")


def _grid(config: ExperimentConfig) -> Grid:
    return Grid(config.grid.half_dim, config.grid.resolved_resolution())


def _record(
    report: RunReport, name: str, tolerance: float, check: Callable[[], Any]
) -> CheckRecord:
    return report.add(evaluate(name, tolerance, check))


def _error_record(report: RunReport, name: str, tolerance: float, error: MomentLabError) -> None:
    report.add(
        CheckRecord(name, CheckStatus.ERROR, None, tolerance, f"{type(error).__name__}: {error}")
    )


# ── Flow ──────────────────────────────────────────────────────────────────


def _trace_rows(trace: List[FlowRecord]) -> List[Dict[str, float]]:
    return [record.to_dict() for record in trace]


def _resume_state(
    store: ArtifactStore, omega: DifferentialForm, theta: VolumeSpec
) -> Tuple[FlowState, float, List[Dict[str, float]]]:
    loaded = store.load_checkpoint()
    if loaded is None:
        raise ConfigError(f"no flow checkpoint to resume in {store.root}")
    checkpoint, phi = loaded
    state = initial_state(KahlerPotential(phi, omega), theta, t=checkpoint.t, step=checkpoint.step)
    earlier = [row for row in store.read_trace(TRACE_FILE) if row["step"] < checkpoint.step]
    logger.info("resuming flow at step %d (t=%.6g)", checkpoint.step, checkpoint.t)
    return state, checkpoint.dt, earlier


def run_flow_experiment(
    config: ExperimentConfig, store: ArtifactStore, resume: bool = False
) -> RunReport:
    """Volume flow to the configured θ with trace, final field and checks."""
    grid = _grid(config)
    omega = BundleSetup.standard(grid).reference_curvature
    theta = build_theta(config.theta, grid)
    tol = config.tolerances
    report = RunReport(kind="flow", seed=config.seed)

    resume_state: Optional[FlowState] = None
    dt = config.flow.dt
    earlier: List[Dict[str, float]] = []
    if resume:
        resume_state, checkpoint_dt, earlier = _resume_state(store, omega, theta)
        dt = dt if dt is not None else checkpoint_dt

    step_size = dt if dt is not None else stability_bound(grid, theta)

    def save(state: FlowState, trace: List[FlowRecord]) -> None:
        checkpoint = FlowCheckpoint(
            state.step, state.t, state.F, state.residual, state.margin, step_size
        )
        store.save_checkpoint(checkpoint, DifferentialForm.scalar(grid, state.potential.phi))
        store.write_trace(TRACE_FILE, earlier + _trace_rows(trace), TRACE_COLUMNS)

    start = KahlerPotential.zero(omega)
    try:
        result = run_flow(
            theta,
            start,
            tol=tol.residual,
            max_t=config.flow.max_t,
            dt=step_size,
            resume=resume_state,
            checkpoint=save,
            checkpoint_every=config.flow.checkpoint_every,
        )
    except FlowConvergenceError as e:
        store.write_trace(TRACE_FILE, earlier + _trace_rows(e.trace), TRACE_COLUMNS)
        report.artifacts.append(TRACE_FILE)
        last = e.trace[-1].residual if e.trace else float("nan")
        report.add(CheckRecord("flow.residual", CheckStatus.FAILED, last, tol.residual, str(e)))
        return report
    except MomentLabError as e:
        _error_record(report, "flow.residual", tol.residual, e)
        return report

    store.write_trace(TRACE_FILE, earlier + _trace_rows(result.trace), TRACE_COLUMNS)
    store.write_field(FIELD_FILE, DifferentialForm.scalar(grid, result.potential.phi))
    store.clear_checkpoint()
    report.artifacts.extend([TRACE_FILE, FIELD_FILE, FIELD_FILE + ".json"])
    report.warnings.extend(result.warnings)

    final = result.final
    _record(
        report,
        "flow.residual",
        tol.residual,
        lambda: Measurement(
            final.residual,
            True,
            f"t = {final.t:.6g}, {final.step} steps, dt = {result.dt:.3e}",
        ),
    )
    _record(
        report, "flow.energy_monotone", ENERGY_TOLERANCE, lambda: _energy_increase(earlier, result)
    )
    if grid.half_dim == 1:
        _record(
            report,
            "flow.oracle",
            tol.oracle,
            lambda: float(np.max(np.abs(result.potential.phi - linear_oracle(theta, omega).phi))),
        )
    if config.flow.second_start_amplitude > 0.0:
        _record(
            report,
            "flow.uniqueness",
            tol.uniqueness,
            lambda: _uniqueness_gap(config, theta, omega, result, step_size),
        )
    return report


def _energy_increase(earlier: List[Dict[str, float]], result: FlowResult) -> Measurement:
    energies = np.array([row["F"] for row in earlier] + [record.F for record in result.trace])
    increase = float(np.max(np.diff(energies))) if len(energies) > 1 else 0.0
    return Measurement(max(0.0, increase), True, f"largest per-step change in F = {increase:.3e}")


def _uniqueness_gap(
    config: ExperimentConfig,
    theta: VolumeSpec,
    omega: DifferentialForm,
    result: FlowResult,
    dt: float,
) -> Measurement:
    grid = omega.grid
    start = random_field(make_rng(config.seed), grid, config.flow.second_start_amplitude)
    second = run_flow(
        theta,
        KahlerPotential.create(start, omega),
        tol=config.tolerances.residual,
        max_t=config.flow.max_t,
        dt=dt,
    )
    gap = float(np.max(np.abs(second.potential.phi - result.potential.phi)))
    return Measurement(gap, True, f"second start converged at t = {second.final.t:.6g}")


# ── Weinstein holonomy ────────────────────────────────────────────────────


def run_weinstein_experiment(config: ExperimentConfig, store: ArtifactStore) -> RunReport:
    """Holonomy of the configured rotation loop, written to holonomy.json."""
    settings = config.holonomy
    tol = config.tolerances
    report = RunReport(kind="weinstein", seed=config.seed)
    if not any(settings.axis):
        raise ConfigError("holonomy axis must be non-zero")
    loop = LoopSpec.rotation(
        settings.axis, settings.turns, settings.substeps, settings.hamiltonian_shift
    )

    try:
        result = weinstein_hom(loop, samples=settings.samples, seed=config.seed)
    except HolonomyError as e:
        store.write_json(HOLONOMY_FILE, {"error": str(e), "refinements": e.trace, **loop.to_dict()})
        report.artifacts.append(HOLONOMY_FILE)
        _error_record(report, "holonomy.phase", tol.holonomy, e)
        return report

    store.write_json(HOLONOMY_FILE, result.to_dict(loop))
    report.artifacts.append(HOLONOMY_FILE)
    shift = expected_shift_factor(settings.hamiltonian_shift, settings.turns)
    expected = (-1.0) ** settings.turns * shift
    _record(
        report,
        "holonomy.phase",
        tol.holonomy,
        lambda: Measurement(
            abs(result.phase - expected),
            True,
            f"λ = {result.phase.real:.12f}{result.phase.imag:+.12f}i, "
            f"expected {expected.real:.12f}{expected.imag:+.12f}i",
        ),
    )
    _record(report, "holonomy.variance", tol.variance, lambda: result.sample_variance)
    return report


# ── Moment-identity probes ────────────────────────────────────────────────


def inputs_hash(*arrays: np.ndarray) -> str:
    """Short SHA-256 digest of the probe inputs, stable across runs."""
    digest = hashlib.sha256()
    for array in arrays:
        digest.update(np.ascontiguousarray(array, dtype="<f8").tobytes())
    return digest.hexdigest()[:16]


def run_moment_check(config: ExperimentConfig, store: ArtifactStore) -> RunReport:
    """Random probes of the moment-map identity, one ProbeRecord each."""
    grid = _grid(config)
    bundle = BundleSetup.standard(grid)
    rng = make_rng(config.seed)
    amplitude = 0.02 if grid.half_dim == 1 else 0.005
    report = RunReport(kind="moment-check", seed=config.seed)
    probes: List[ProbeRecord] = []
    low, high = ORDER_WINDOW
    failure: Optional[MomentLabError] = None

    for index in range(config.probes):
        connection = RelativeConnection(bundle, random_one_form(rng, grid, amplitude))
        b = random_one_form(rng, grid, amplitude)
        eta = InvariantField(random_vector_field(rng, grid), random_field(rng, grid))
        digest = inputs_hash(connection.a.coefficients(), b.coefficients(), eta.v.stacked(), eta.g)
        margin = is_symplectic(curvature(connection)).margin
        try:
            check = moment_identity_residual(connection, b, eta, config.epsilon)
        except MomentLabError as e:
            probes.append(
                ProbeRecord(f"moment_identity[{index}]", digest, float("nan"), None, margin)
            )
            failure = e
            break
        probes.append(
            ProbeRecord(
                f"moment_identity[{index}]",
                digest,
                check.residual,
                check.order if check.resolved else None,
                margin,
            )
        )

    store.write_json(
        PROBES_FILE,
        {
            "epsilon": config.epsilon,
            "grid": grid.to_dict(),
            "probes": [p.to_dict() for p in probes],
        },
    )
    report.artifacts.append(PROBES_FILE)
    if failure is not None:
        _error_record(report, "moment.identity", config.tolerances.moment, failure)
        return report

    orders = [p.order for p in probes if p.order is not None]
    _record(
        report,
        "moment.identity",
        config.tolerances.moment,
        lambda: Measurement(
            max(p.residual for p in probes),
            all(low <= order <= high for order in orders),
            f"{len(probes)} probes, {len(orders)} with resolved order",
        ),
    )
    return report


# ── Dispatch ──────────────────────────────────────────────────────────────


def run_experiment(
    config: ExperimentConfig,
    store: Optional[ArtifactStore] = None,
    resume: bool = False,
) -> RunReport:
    """
    Run the experiment named by ``config.kind`` and write its artifacts.

    Args:
        config: Validated experiment configuration.
        store: Artifact store; one at ``config.output`` when None.
        resume: Continue a flow from its last checkpoint.

    Returns:
        The run report; it passes iff every record passes.

    Raises:
        ConfigError: for configurations that cannot be run (exit code 2).
    """
    store = store if store is not None else ArtifactStore(config.output)
    store.write_json(CONFIG_FILE, config.model_dump(mode="json"))
    logger.info("running %s experiment (seed %d) into %s", config.kind, config.seed, store.root)

    if config.kind == "verify":
        report = verify_suite(
            config.seed,
            config.level,
            tolerances=config.tolerances,
            probes=config.probes,
            epsilon=config.epsilon,
        )
    elif config.kind == "flow":
        report = run_flow_experiment(config, store, resume=resume)
    elif config.kind == "weinstein":
        report = run_weinstein_experiment(config, store)
    elif config.kind == "moment-check":
        report = run_moment_check(config, store)
    else:
        raise ConfigError(f"unknown experiment kind: {config.kind}")

    report.artifacts.extend([CONFIG_FILE, REPORT_FILE, TIMINGS_FILE])
    store.write_json(REPORT_FILE, report.to_dict())
    for name, wall_ms in report.timings().items():
        store.record_timing(name, wall_ms)
    store.flush_timings()
    return report
