"""Tests for the volume flow."""

import math

import numpy as np
import pytest

from momentlab.connections import BundleSetup
from momentlab.errors import FlowConvergenceError, StepSizeError
from momentlab.forms import Grid
from momentlab.kahler import (
    FlowMonitor,
    FlowRecord,
    FlowState,
    KahlerPotential,
    VolumeSpec,
    flow_step,
    initial_state,
    linear_oracle,
    nyquist_eigenvalue,
    run_flow,
    stability_bound,
)


def setup(resolution=8, frequency=1):
    """Reference form on T² and a cosine volume."""
    omega = BundleSetup.standard(Grid(1, resolution)).reference_curvature
    x1 = omega.grid.coordinates()[0]
    theta = VolumeSpec.normalized(omega.grid, 1.0 + 0.3 * np.cos(2 * np.pi * frequency * x1))
    return omega, theta


class TestFlowStep:
    """Tests for single RK4 steps."""

    def test_stability_bound_flat(self):
        """Test the bound 0.8·4π/λ_max on the flat N = 8 grid."""
        grid = Grid(1, 8)
        # λ_max = (2π·N/2)²
        expected = 0.8 * 4.0 * math.pi / (8.0 * math.pi) ** 2
        assert stability_bound(grid, VolumeSpec.flat(grid)) == pytest.approx(expected)

    def test_stability_bound_on_t4(self):
        """Test that λ_max counts each complex dimension on T⁴."""
        t2, t4 = Grid(1, 8), Grid(2, 8)
        assert nyquist_eigenvalue(t4) == pytest.approx(2.0 * nyquist_eigenvalue(t2))
        assert stability_bound(t4, VolumeSpec.flat(t4)) == pytest.approx(
            0.5 * stability_bound(t2, VolumeSpec.flat(t2))
        )

    def test_default_grid_accepts_bound(self):
        """Test that the N = 64 step 0.8·4π·min θ/(64π)² is accepted."""
        omega, theta = setup(resolution=64)
        bound = stability_bound(omega.grid, theta)
        assert bound == pytest.approx(0.8 * 4.0 * math.pi * 0.7 / (64.0 * math.pi) ** 2, rel=1e-12)
        state = initial_state(KahlerPotential.zero(omega), theta)
        advanced = flow_step(state, theta, bound)
        assert advanced.step == 1
        assert advanced.residual < state.residual

    def test_step_size_error(self):
        """Test that a step above the bound is refused."""
        omega, theta = setup()
        state = initial_state(KahlerPotential.zero(omega), theta)
        bound = stability_bound(omega.grid, theta)
        with pytest.raises(StepSizeError) as excinfo:
            flow_step(state, theta, 1.01 * bound)
        assert excinfo.value.bound == pytest.approx(bound)

    def test_step_advances(self):
        """Test that a step advances time and stays mean zero."""
        omega, theta = setup()
        state = initial_state(KahlerPotential.zero(omega), theta)
        advanced = flow_step(state, theta, 0.005)
        assert advanced.step == 1
        assert advanced.t == pytest.approx(0.005)
        assert abs(float(np.mean(advanced.potential.phi))) < 1e-15
        assert advanced.residual < state.residual
        assert advanced.F < state.F

    def test_fifth_order_local_error(self):
        """Test the local error of RK4 against step doubling."""
        omega, theta = setup(frequency=2)
        state = initial_state(KahlerPotential.zero(omega), theta)

        def local_error(h):
            full = flow_step(state, theta, h).potential.phi
            half = flow_step(flow_step(state, theta, h / 2.0), theta, h / 2.0).potential.phi
            return float(np.max(np.abs(full - half)))

        order = math.log2(local_error(0.008) / local_error(0.004))
        assert 4.5 <= order <= 5.5


class TestRunFlow:
    """Tests for run_flow."""

    def test_budget_exhausted(self):
        """Test that a short budget raises with the partial trace."""
        omega, theta = setup()
        with pytest.raises(FlowConvergenceError) as excinfo:
            run_flow(theta, KahlerPotential.zero(omega), max_t=0.01)
        trace = excinfo.value.trace
        assert len(trace) >= 2
        assert [record.step for record in trace] == list(range(len(trace)))

    def test_checkpoints_and_resume(self):
        """Test checkpoint callbacks and resuming from an intermediate state."""
        omega, theta = setup()
        calls = []
        result = run_flow(
            theta,
            KahlerPotential.zero(omega),
            tol=1e-6,
            checkpoint=lambda state, trace: calls.append(state.step),
            checkpoint_every=50,
        )
        assert calls == list(range(50, result.final.step + 1, 50))

        state = initial_state(KahlerPotential.zero(omega), theta)
        for _ in range(10):
            state = flow_step(state, theta, result.dt)
        resumed = run_flow(theta, KahlerPotential.zero(omega), tol=1e-6, resume=state)
        assert resumed.trace[0].step == 10
        assert resumed.final.step == result.final.step
        assert np.allclose(resumed.potential.phi, result.potential.phi, atol=1e-14)

    def test_record_dict(self):
        """Test the JSON shape of a trace record."""
        omega, theta = setup()
        record = FlowRecord.of(initial_state(KahlerPotential.zero(omega), theta), wall_ms=1.5)
        assert record.to_dict() == {
            "step": 0,
            "t": 0.0,
            "F": 0.0,
            "residual_linf": pytest.approx(1.0 / 0.7 - 1.0),
            "margin": 1.0,
            "wall_ms": 1.5,
        }

    @pytest.mark.slow
    def test_converges_to_oracle(self):
        """Test that the flow reaches the T² oracle with non-increasing F."""
        omega, theta = setup(resolution=16)
        result = run_flow(theta, KahlerPotential.zero(omega))
        oracle = linear_oracle(theta, omega)
        assert result.converged
        assert result.warnings == []
        assert float(np.max(np.abs(result.potential.phi - oracle.phi))) < 1e-6
        energies = [record.F for record in result.trace]
        assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))

    @pytest.mark.slow
    def test_default_resolution(self):
        """Test the N = 64 flow at the default step size."""
        omega, theta = setup(resolution=64)
        result = run_flow(theta, KahlerPotential.zero(omega))
        assert result.dt == stability_bound(omega.grid, theta)
        assert result.final.step < 32000
        assert result.warnings == []
        oracle = linear_oracle(theta, omega)
        assert float(np.max(np.abs(result.potential.phi - oracle.phi))) < 1e-6


class TestFlowMonitor:
    """Tests for energy and residual warnings."""

    def state(self, step, F, residual):
        omega, _ = setup()
        return FlowState(KahlerPotential.zero(omega), 0.01 * step, F, residual, 1.0, step)

    def test_residual_warning_after_energy_warning(self):
        """Test that an earlier energy warning does not hide a residual increase."""
        monitor = FlowMonitor()
        monitor.observe(self.state(60, 0.0, 1e-3), self.state(61, 1e-9, 1e-3))
        monitor.observe(self.state(61, 1e-9, 1e-3), self.state(62, 0.0, 2e-3))
        assert len(monitor.warnings) == 2
        assert monitor.warnings[0].startswith("energy increased at step 61")
        assert monitor.warnings[1].startswith("residual increased after transient at step 62")
        assert monitor.residual_warned

    def test_residual_warning_once(self):
        """Test that a residual increase is reported once."""
        monitor = FlowMonitor()
        monitor.observe(self.state(70, -1.0, 1e-3), self.state(71, -2.0, 2e-3))
        monitor.observe(self.state(71, -2.0, 2e-3), self.state(72, -3.0, 3e-3))
        assert len(monitor.warnings) == 1

    def test_transient_ignored(self):
        """Test that residual increases inside the transient are not reported."""
        monitor = FlowMonitor()
        monitor.observe(self.state(10, 0.0, 1e-3), self.state(11, -1.0, 2e-3))
        assert monitor.warnings == []
        assert not monitor.residual_warned
