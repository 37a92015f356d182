"""
MomentLab Weinstein Holonomy - Lifting Hamiltonian loops of S² to the Hopf bundle.

A loop of rotations is lifted through its prequantum generator and
integrated with RK4 from many start points. The time-1 map of a
mean-zero Hamiltonian loop is multiplication by a single phase λ, the value
of the Weinstein homomorphism on the loop's class.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import pi
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from momentlab.errors import HolonomyError
from momentlab.holonomy.hopf import (
    RotationHamiltonian,
    inner,
    lift_generator,
    normalize,
    random_points,
)
from momentlab.validation.config import thread_count

logger = logging.getLogger(__name__)

MIN_SUBSTEPS_PER_TURN = 1000
VARIANCE_TOLERANCE = 1e-8
STABILITY_TOLERANCE = 1e-6
MAX_DOUBLINGS = 6


@dataclass(frozen=True)
class LoopSegment:
    """Rotation by 2π·turns about ``axis`` over one unit of time."""

    axis: Tuple[float, float, float]
    turns: int
    hamiltonian_shift: float = 0.0

    @property
    def rotation(self) -> RotationHamiltonian:
        return RotationHamiltonian.about(self.axis, self.hamiltonian_shift)


@dataclass(frozen=True)
class LoopSpec:
    """
    Loop in the rotation group, possibly a concatenation of segments.

    Example:
        >>> LoopSpec.rotation((0, 0, 1), turns=1, substeps=2000)
    """

    segments: Tuple[LoopSegment, ...]
    substeps: int

    @classmethod
    def rotation(
        cls,
        axis: Sequence[float],
        turns: int,
        substeps: int,
        hamiltonian_shift: float = 0.0,
    ) -> "LoopSpec":
        segment = LoopSegment(
            tuple(float(a) for a in axis),  # type: ignore[arg-type]
            int(turns),
            float(hamiltonian_shift),
        )
        return cls((segment,), int(substeps))

    def then(self, other: "LoopSpec") -> "LoopSpec":
        """Concatenation: this loop followed by ``other``."""
        return LoopSpec(self.segments + other.segments, max(self.substeps, other.substeps))

    def with_substeps(self, substeps: int) -> "LoopSpec":
        return LoopSpec(self.segments, int(substeps))

    @property
    def axis(self) -> Tuple[float, float, float]:
        return self.segments[0].axis

    @property
    def turns(self) -> int:
        return sum(s.turns for s in self.segments)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "segments": [
                {"axis": list(s.axis), "turns": s.turns, "hamiltonian_shift": s.hamiltonian_shift}
                for s in self.segments
            ],
            "substeps": self.substeps,
        }


@dataclass
class HolonomyResult:
    """Phase of the time-1 map and its cross-sample spread."""

    phase: complex
    sample_variance: float
    step_count: int
    samples: int = 0
    trace: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self, loop: Optional[LoopSpec] = None) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "lambda_re": self.phase.real,
            "lambda_im": self.phase.imag,
            "variance": self.sample_variance,
            "step_count": self.step_count,
            "samples": self.samples,
        }
        if loop is not None:
            data["axis"] = list(loop.axis)
            data["turns"] = loop.turns
            data["substeps"] = self.step_count // max(1, len(loop.segments))
            data["segments"] = loop.to_dict()["segments"]
        if self.trace:
            data["refinements"] = self.trace
        return data


def _rk4_segment(z: np.ndarray, segment: LoopSegment, substeps: int) -> np.ndarray:
    if segment.turns == 0:
        return z
    rotation = segment.rotation
    speed = float(segment.turns)
    h = 1.0 / substeps
    for _ in range(substeps):
        k1 = lift_generator(rotation, z, speed)
        k2 = lift_generator(rotation, normalize(z + 0.5 * h * k1), speed)
        k3 = lift_generator(rotation, normalize(z + 0.5 * h * k2), speed)
        k4 = lift_generator(rotation, normalize(z + h * k3), speed)
        z = normalize(z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    return z


def _transport_chunk(z: np.ndarray, segments: Sequence[LoopSegment], substeps: int) -> np.ndarray:
    for segment in segments:
        z = _rk4_segment(z, segment, substeps)
    return z


def transport(
    segments: Sequence[LoopSegment],
    starts: np.ndarray,
    substeps: int,
    workers: Optional[int] = None,
) -> np.ndarray:
    """
    Integrate the lifted loop from each start point (no resolution precondition).

    Trajectories are independent; with ``workers`` > 1 the starts are split
    into contiguous chunks integrated on a thread pool and reassembled in order.
    """
    if workers is None:
        workers = thread_count()
    workers = max(1, min(int(workers), len(starts)))
    if workers == 1:
        return _transport_chunk(starts, segments, substeps)
    chunks = np.array_split(starts, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda chunk: _transport_chunk(chunk, segments, substeps), chunks))
    return np.concatenate(results, axis=0)


def phase_statistics(starts: np.ndarray, ends: np.ndarray) -> Tuple[complex, float]:
    """Best scalar λ with ends ≈ λ·starts, and mean |end - λ·start|²."""
    samples = inner(starts, ends)
    mean = complex(np.mean(samples))
    if abs(mean) == 0.0:
        raise HolonomyError("time-1 map has no scalar component")
    phase = mean / abs(mean)
    variance = float(np.mean(np.sum(np.abs(ends - phase * starts) ** 2, axis=-1)))
    return phase, variance


def loop_holonomy(
    loop: LoopSpec,
    samples: int = 16,
    seed: int = 0,
    workers: Optional[int] = None,
) -> HolonomyResult:
    """
    Time-1 phase of the lifted loop from ``samples`` random start points.

    Raises:
        HolonomyError: if substeps are below 1000 per turn, or the time-1
            map is not scalar within the variance tolerance.
    """
    for segment in loop.segments:
        if loop.substeps < MIN_SUBSTEPS_PER_TURN * abs(segment.turns):
            raise HolonomyError(
                f"substeps={loop.substeps} below {MIN_SUBSTEPS_PER_TURN} per turn "
                f"for a {segment.turns}-turn segment"
            )
    if all(s.turns == 0 for s in loop.segments):
        return HolonomyResult(complex(1.0, 0.0), 0.0, 0, samples)

    starts = random_points(np.random.default_rng(seed), samples)
    ends = transport(loop.segments, starts, loop.substeps, workers)
    phase, variance = phase_statistics(starts, ends)
    logger.debug(
        "loop holonomy: substeps=%d λ=%.12f%+.12fi variance=%.3e",
        loop.substeps,
        phase.real,
        phase.imag,
        variance,
    )
    if variance > VARIANCE_TOLERANCE:
        raise HolonomyError(
            f"non-scalar time-1 map (variance {variance:.3e}); increase substeps",
            [{"substeps": loop.substeps, "variance": variance}],
        )
    return HolonomyResult(phase, variance, loop.substeps * len(loop.segments), samples)


def weinstein_hom(
    loop: LoopSpec,
    samples: int = 16,
    seed: int = 0,
    workers: Optional[int] = None,
) -> HolonomyResult:
    """
    Weinstein homomorphism on the class of ``loop``.

    Doubles substeps until λ changes by less than 1e-6 between refinements.

    Raises:
        HolonomyError: if λ does not stabilize within six doublings; carries the trace.
    """
    trace: List[Dict[str, Any]] = []
    current = loop_holonomy(loop, samples, seed, workers)
    trace.append(_trace_entry(loop.substeps, current))
    substeps = loop.substeps
    for _ in range(MAX_DOUBLINGS):
        substeps *= 2
        refined = loop_holonomy(loop.with_substeps(substeps), samples, seed, workers)
        trace.append(_trace_entry(substeps, refined))
        if abs(refined.phase - current.phase) < STABILITY_TOLERANCE:
            refined.trace = trace
            logger.info(
                "weinstein: λ=%.9f%+.9fi after %d refinements",
                refined.phase.real,
                refined.phase.imag,
                len(trace) - 1,
            )
            return refined
        current = refined
    raise HolonomyError(f"λ did not stabilize after {MAX_DOUBLINGS} doublings", trace)


def _trace_entry(substeps: int, result: HolonomyResult) -> Dict[str, Any]:
    return {
        "substeps": substeps,
        "lambda_re": result.phase.real,
        "lambda_im": result.phase.imag,
        "variance": result.sample_variance,
    }


def expected_shift_factor(shift: float, turns: int) -> complex:
    """e^{-2πi·shift·turns}, the factor a constant Hamiltonian shift contributes."""
    return complex(np.exp(-2j * pi * shift * turns))
