"""
MomentLab Volume Flow - Downward gradient flow of the Kempf-Ness functional.

At the potential level the flow is

    φ̇ = -(ρ(φ)/θ - 1),

integrated with classical RK4 and re-projected to mean zero after every
step. The flow converges to the unique potential with ρ(φ) = θ.
"""

import logging
import time
from dataclasses import dataclass, field
from math import pi
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from momentlab.errors import FlowConvergenceError, KahlerConeError, StepSizeError
from momentlab.forms.grid import Grid
from momentlab.kahler.potentials import KahlerPotential, VolumeSpec, kempf_ness, ma_density

logger = logging.getLogger(__name__)

STABILITY_SAFETY = 0.8
ENERGY_SLACK = 1e-12
TRANSIENT_STEPS = 50


@dataclass(frozen=True)
class FlowState:
    """Point on a flow trajectory."""

    potential: KahlerPotential
    t: float
    F: float
    residual: float
    margin: float
    step: int = 0


@dataclass(frozen=True)
class FlowRecord:
    """One row of the flow trace."""

    step: int
    t: float
    F: float
    residual: float
    margin: float
    wall_ms: float = 0.0

    @classmethod
    def of(cls, state: FlowState, wall_ms: float = 0.0) -> "FlowRecord":
        return cls(state.step, state.t, state.F, state.residual, state.margin, wall_ms)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "step": self.step,
            "t": self.t,
            "F": self.F,
            "residual_linf": self.residual,
            "margin": self.margin,
            "wall_ms": self.wall_ms,
        }


@dataclass
class FlowResult:
    """Outcome of run_flow."""

    trace: List[FlowRecord]
    final: FlowState
    converged: bool = True
    dt: float = 0.0
    warnings: List[str] = field(default_factory=list)

    @property
    def potential(self) -> KahlerPotential:
        return self.final.potential


@dataclass
class FlowMonitor:
    """
    Energy and residual anomalies along a trajectory.

    Every energy increase is reported. A residual increase after the
    transient is reported once.
    """

    warnings: List[str] = field(default_factory=list)
    residual_warned: bool = False

    def observe(self, previous: FlowState, state: FlowState) -> None:
        if state.F > previous.F + ENERGY_SLACK:
            self._warn(
                f"energy increased at step {state.step}: {previous.F:.12e} -> {state.F:.12e}"
            )
        if (
            not self.residual_warned
            and state.step > TRANSIENT_STEPS
            and state.residual > previous.residual
        ):
            self.residual_warned = True
            self._warn(
                f"residual increased after transient at step {state.step} (t={state.t:.4g})"
            )

    def _warn(self, message: str) -> None:
        logger.warning(message)
        self.warnings.append(message)


def nyquist_eigenvalue(grid: Grid) -> float:
    """λ_max = n·(2π·N/2)², the Nyquist Laplacian eigenvalue per complex dimension."""
    return grid.half_dim * (pi * grid.resolution) ** 2


def stability_bound(grid: Grid, theta: VolumeSpec) -> float:
    """Explicit RK4 step bound 0.8·4π/(λ_max·max(1/θ))."""
    lam_max = nyquist_eigenvalue(grid)
    return STABILITY_SAFETY * 4.0 * pi / (lam_max * float(np.max(1.0 / theta.theta)))


def residual_of(potential: KahlerPotential, theta: VolumeSpec) -> float:
    """‖ρ(φ)/θ - 1‖∞."""
    return float(np.max(np.abs(ma_density(potential) / theta.theta - 1.0)))


def initial_state(
    potential: KahlerPotential, theta: VolumeSpec, t: float = 0.0, step: int = 0
) -> FlowState:
    return FlowState(
        potential=potential,
        t=t,
        F=kempf_ness(potential, theta),
        residual=residual_of(potential, theta),
        margin=potential.margin,
        step=step,
    )


def _velocity(phi: np.ndarray, omega: Any, theta: VolumeSpec) -> np.ndarray:
    stage = KahlerPotential(phi, omega)
    if not stage.in_cone():
        raise KahlerConeError(
            f"RK stage left the Kähler cone (margin {stage.margin:.3e}); reduce dt", stage.margin
        )
    return 1.0 - stage.density / theta.theta


def flow_step(state: FlowState, theta: VolumeSpec, dt: float) -> FlowState:
    """
    One RK4 step of the volume flow.

    Raises:
        StepSizeError: if dt exceeds the stability bound.
        KahlerConeError: if a stage or the result leaves the cone.
    """
    potential = state.potential
    bound = stability_bound(potential.grid, theta)
    if dt > bound:
        raise StepSizeError(f"dt={dt:.3e} exceeds the stability bound {bound:.3e}", dt, bound)
    omega = potential.omega
    phi = potential.phi
    k1 = _velocity(phi, omega, theta)
    k2 = _velocity(phi + 0.5 * dt * k1, omega, theta)
    k3 = _velocity(phi + 0.5 * dt * k2, omega, theta)
    k4 = _velocity(phi + dt * k3, omega, theta)
    advanced = KahlerPotential.create(phi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), omega)
    if not advanced.in_cone():
        raise KahlerConeError(
            f"flow left the Kähler cone at t={state.t + dt:.6g} (margin {advanced.margin:.3e}); "
            "use a smaller dt",
            advanced.margin,
        )
    return initial_state(advanced, theta, t=state.t + dt, step=state.step + 1)


def run_flow(
    theta: VolumeSpec,
    start: KahlerPotential,
    tol: float = 1e-8,
    max_t: float = 20.0,
    dt: Optional[float] = None,
    resume: Optional[FlowState] = None,
    checkpoint: Optional[Callable[[FlowState, List[FlowRecord]], None]] = None,
    checkpoint_every: int = 0,
) -> FlowResult:
    """
    Flow from ``start`` until ‖ρ/θ - 1‖∞ < tol or t > max_t.

    Args:
        theta: Prescribed volume.
        start: Initial potential.
        tol: Residual tolerance.
        max_t: Flow-time budget.
        dt: Step size; defaults to the stability bound.
        resume: State to continue from instead of ``start``.
        checkpoint: Called with the current state and trace every ``checkpoint_every`` steps.
        checkpoint_every: Checkpoint period in steps (0 disables).

    Returns:
        FlowResult with one trace record per accepted step.

    Raises:
        FlowConvergenceError: if the budget is exhausted; carries the trace.
    """
    step_size = dt if dt is not None else stability_bound(start.grid, theta)
    state = resume if resume is not None else initial_state(start, theta)
    trace: List[FlowRecord] = [FlowRecord.of(state)]
    monitor = FlowMonitor()
    logger.info(
        "volume flow: N=%d n=%d dt=%.3e tol=%.1e start residual=%.3e",
        start.grid.resolution,
        start.grid.half_dim,
        step_size,
        tol,
        state.residual,
    )

    while state.residual >= tol:
        if state.t > max_t:
            raise FlowConvergenceError(
                f"flow did not reach residual {tol:.1e} by t={max_t} "
                f"(residual {state.residual:.3e})",
                trace,
            )
        started = time.perf_counter()
        previous = state
        state = flow_step(state, theta, step_size)
        wall_ms = (time.perf_counter() - started) * 1000.0
        trace.append(FlowRecord.of(state, wall_ms))

        monitor.observe(previous, state)
        if checkpoint is not None and checkpoint_every and state.step % checkpoint_every == 0:
            checkpoint(state, trace)
        if state.step % 1000 == 0:
            logger.debug(
                "step %d t=%.4f F=%.10e residual=%.3e",
                state.step,
                state.t,
                state.F,
                state.residual,
            )

    logger.info(
        "volume flow converged at t=%.4f after %d steps (residual %.3e)",
        state.t,
        state.step,
        state.residual,
    )
    return FlowResult(
        trace=trace, final=state, converged=True, dt=step_size, warnings=monitor.warnings
    )
