"""
MomentLab Configuration - Experiment configuration loading and validation.

This module provides the Config class for loading an experiment document
(JSON or YAML), applying command-line overrides and validating it against
the ExperimentConfig schema.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, ValidationError, model_validator

from momentlab.errors import ConfigError

THREADS_ENV = "MOMENTLAB_THREADS"
MAX_SEED = 2**64 - 1


class StrictModel(BaseModel):
    """Base schema that rejects unknown keys."""

    model_config = ConfigDict(extra="forbid")


class GridConfig(StrictModel):
    """Grid for torus experiments."""

    half_dim: Literal[1, 2] = 1
    resolution: Optional[int] = Field(default=None, ge=8)

    @model_validator(mode="after")
    def _even_resolution(self) -> "GridConfig":
        if self.resolution is not None and self.resolution % 2:
            raise ValueError(f"resolution must be even, got {self.resolution}")
        return self

    def resolved_resolution(self) -> int:
        if self.resolution is not None:
            return self.resolution
        return 64 if self.half_dim == 1 else 16


class CosineMode(StrictModel):
    """One cosine mode of θ = 1 + Σ amplitude·cos(2π·frequency·x_axis)."""

    amplitude: float
    axis: int = Field(default=0, ge=0, le=3)
    frequency: int = Field(default=1, ge=1)


class ThetaConfig(StrictModel):
    """Prescribed volume form: a preset or a field file."""

    preset: Literal["flat", "cosine", "file"] = "cosine"
    modes: List[CosineMode] = Field(default_factory=lambda: [CosineMode(amplitude=0.3)])
    path: Optional[str] = None

    @model_validator(mode="after")
    def _check_source(self) -> "ThetaConfig":
        if self.preset == "file" and not self.path:
            raise ValueError("theta preset 'file' needs a path")
        if self.preset == "cosine" and sum(abs(m.amplitude) for m in self.modes) >= 1.0:
            raise ValueError("cosine amplitudes must sum below 1 so θ stays positive")
        return self


class ToleranceConfig(StrictModel):
    """Acceptance tolerances; all must be positive."""

    residual: PositiveFloat = 1e-8
    moment: PositiveFloat = 1e-8
    identity: PositiveFloat = 1e-10
    oracle: PositiveFloat = 1e-6
    uniqueness: PositiveFloat = 1e-5
    holonomy: PositiveFloat = 1e-6
    variance: PositiveFloat = 1e-8


class FlowConfig(StrictModel):
    """Volume-flow integration settings."""

    max_t: PositiveFloat = 20.0
    dt: Optional[PositiveFloat] = None
    checkpoint_every: int = Field(default=1000, ge=0)
    second_start_amplitude: float = 0.02


class HolonomyConfig(StrictModel):
    """Rotation loop lifted to the Hopf bundle."""

    axis: List[float] = Field(default_factory=lambda: [0.0, 0.0, 1.0], min_length=3, max_length=3)
    turns: int = 1
    substeps: int = Field(default=1000, ge=1)
    samples: int = Field(default=16, ge=1)
    hamiltonian_shift: float = 0.0


class ExperimentConfig(StrictModel):
    """Complete MomentLab experiment schema."""

    kind: Literal["verify", "flow", "weinstein", "moment-check"] = "verify"
    level: Literal["quick", "full"] = "quick"
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    output: str = "momentlab-out"
    probes: int = Field(default=20, ge=1)
    epsilon: PositiveFloat = 1e-4
    grid: GridConfig = Field(default_factory=GridConfig)
    theta: ThetaConfig = Field(default_factory=ThetaConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    flow: FlowConfig = Field(default_factory=FlowConfig)
    holonomy: HolonomyConfig = Field(default_factory=HolonomyConfig)


class Config:
    """
    MomentLab configuration manager.

    Handles loading an experiment document, applying overrides and
    validating the result.

    Example:
        >>> config = Config.load("flow.json")
        >>> config.apply_overrides(seed=7, tol=1e-9)
        >>> experiment = config.experiment
    """

    def __init__(self, data: Optional[Dict[str, Any]] = None):
        """
        Initialize Config.

        Args:
            data: Raw configuration dictionary.
        """
        self._data: Dict[str, Any] = dict(data or {})
        self._experiment: Optional[ExperimentConfig] = None

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None) -> "Config":
        """
        Load a configuration document; JSON is read through the YAML loader.

        Args:
            path: Config file, or None for defaults.

        Returns:
            Config instance with loaded configuration.
        """
        if path is None:
            return cls()
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        return cls(cls._load_yaml(path))

    @classmethod
    def _load_yaml(cls, path: Path) -> Dict[str, Any]:
        try:
            with open(path) as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Failed to load config from {path}: {e}")
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"Config in {path} must be a mapping, got {type(data).__name__}")
        return data

    def apply_overrides(
        self,
        kind: Optional[str] = None,
        seed: Optional[int] = None,
        output: Optional[str] = None,
        tol: Optional[float] = None,
        level: Optional[str] = None,
    ) -> "Config":
        """Override individual keys from the command line."""
        if kind is not None:
            self._data["kind"] = kind
        if seed is not None:
            self._data["seed"] = seed
        if output is not None:
            self._data["output"] = output
        if level is not None:
            self._data["level"] = level
        if tol is not None:
            self._data.setdefault("tolerances", {})
            self._data["tolerances"]["residual"] = tol
        self._experiment = None
        return self

    @property
    def experiment(self) -> ExperimentConfig:
        """The validated experiment configuration."""
        if self._experiment is None:
            try:
                self._experiment = ExperimentConfig(**self._data)
            except ValidationError as e:
                raise ConfigError(f"Invalid configuration: {e}")
        return self._experiment

    def get_raw(self) -> Dict[str, Any]:
        return dict(self._data)

    def save(self, path: Union[str, Path]) -> Path:
        """Write the effective, validated configuration as JSON."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        document = json.dumps(self.experiment.model_dump(mode="json"), sort_keys=True, indent=2)
        path.write_text(document + "\n")
        return path


def thread_count() -> int:
    """Cap on internal data parallelism from MOMENTLAB_THREADS (default 1)."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value
