"""Run configuration: a strict JSON schema with exact times and masses."""

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from mfg_switch.costs.cost_model import CostParams
from mfg_switch.discretization.partition import EpsPartition
from mfg_switch.equilibrium.fixed_instant import (
    FixedSwitchInstance,
    example2,
    example3,
    parallel_links,
)
from mfg_switch.equilibrium.fixed_point import EquilibriumOptions
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.solver.time_grid import TimeGrid
from mfg_switch.utilities.constants import (
    DEFAULT_EARLINESS_RATE,
    DEFAULT_MAX_TARGETS,
    DEFAULT_MISS_PENALTY,
    DEFAULT_MONOTONICITY_TRIALS,
)
from mfg_switch.utilities.errors import ConfigValidationError, ParseError
from mfg_switch.utilities.exact import as_time

_KEY_HINTS = {
    "epsilon": "use m, the number of partition intervals (epsilon = T/m)",
    "eps": "use m, the number of partition intervals (epsilon = T/m)",
    "delta": "use grid_divisor (grid step = epsilon/grid_divisor)",
}


class RefineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m_sequence: List[int] = Field(default_factory=lambda: [8, 16, 32, 64])

    @field_validator("m_sequence")
    @classmethod
    def _increasing(cls, value: List[int]) -> List[int]:
        if not value or value[0] < 1 or any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("m_sequence must be a non-empty increasing list of positive integers")
        return value


class MonotonicityConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    instance: Literal["example2", "example3"] = "example2"
    slopes: Optional[List[float]] = Field(
        default=None, description="Parallel-link slopes replacing the preset instance"
    )
    trials: int = Field(default=DEFAULT_MONOTONICITY_TRIALS, ge=1)
    rho0_samples: List[float] = Field(default_factory=lambda: [1.0])

    @field_validator("rho0_samples")
    @classmethod
    def _positive(cls, value: List[float]) -> List[float]:
        if not value or any(r <= 0 for r in value):
            raise ValueError("rho0_samples must be non-empty and positive")
        return value

    def build_instance(self) -> FixedSwitchInstance:
        if self.slopes is not None:
            return parallel_links(self.slopes)
        return example2() if self.instance == "example2" else example3()


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True, allow_inf_nan=False)

    N: int = Field(..., ge=1, description="Number of targets")
    T: Fraction = Field(..., description="Horizon")
    m: int = Field(..., ge=1, description="Partition size, epsilon = T/m")
    grid_divisor: Optional[int] = Field(default=None, ge=1)
    weights: Dict[int, float] = Field(default_factory=dict)
    earliness_rate: float = Field(default=DEFAULT_EARLINESS_RATE, gt=0)
    miss_penalty: float = Field(default=DEFAULT_MISS_PENALTY, ge=0)
    free_flow_cost: float = Field(default=0.0, ge=0)
    initial: Dict[int, Fraction] = Field(..., description="Node id to initial mass")
    solver: EquilibriumOptions = Field(default_factory=EquilibriumOptions)
    refine: RefineConfig = Field(default_factory=RefineConfig)
    monotonicity: MonotonicityConfig = Field(default_factory=MonotonicityConfig)
    seed: int = 0
    max_targets: int = Field(default=DEFAULT_MAX_TARGETS, ge=1)
    output_dir: Optional[Path] = None

    @field_validator("T", mode="before")
    @classmethod
    def _exact_horizon(cls, value):
        horizon = as_time(value)
        if horizon <= 0:
            raise ValueError(f"T must be positive, got {horizon}")
        return horizon

    @field_validator("initial", mode="before")
    @classmethod
    def _exact_masses(cls, value):
        if not isinstance(value, dict):
            raise ValueError("initial must map node ids to masses")
        masses: Dict[Union[int, str], Fraction] = {}
        for key, mass in value.items():
            exact = as_time(mass)
            if exact < 0:
                raise ValueError(f"Mass of node {key} is negative: {mass}")
            masses[key] = exact
        if sum(masses.values(), Fraction(0)) <= 0:
            raise ValueError("Total initial mass must be positive")
        return masses

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.N > self.max_targets:
            raise ConfigValidationError(
                f"N={self.N} exceeds max_targets={self.max_targets}", field="N"
            )
        for name, ids in (("weights", self.weights), ("initial", self.initial)):
            unknown = [i for i in ids if not 0 <= i < 2**self.N]
            if unknown:
                raise ConfigValidationError(
                    f"Node ids {unknown} in {name} do not exist for N={self.N}", field=name
                )
        return self

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        return parse_config(Path(path).read_bytes())

    def cost_params(self) -> CostParams:
        return CostParams(
            size=self.N,
            horizon=self.T,
            weights=self.weights,
            earliness_rate=self.earliness_rate,
            miss_penalty=self.miss_penalty,
            free_flow_cost=self.free_flow_cost,
        )

    def partition(self, m: Optional[int] = None) -> EpsPartition:
        return EpsPartition(self.T, m or self.m)

    def grid(self) -> TimeGrid:
        return self.partition().grid(self.grid_divisor)

    def initial_field(self) -> MassField:
        return MassField.static(self.N, self.T, self.initial)

    def equilibrium_options(self) -> EquilibriumOptions:
        return self.solver


def parse_config(text: bytes) -> RunConfig:
    """Decode and validate a UTF-8 JSON run configuration.

    Raises:
        ParseError: the document is not JSON, not an object, or has unknown keys.
        ConfigValidationError: a value violates a field invariant.
    """
    try:
        data = json.loads(text.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise ParseError(f"Config is not valid UTF-8: {e}", e) from e
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", e
        ) from e
    if not isinstance(data, dict):
        raise ParseError("Config must be a JSON object")

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        for error in errors:
            if error["type"] == "extra_forbidden":
                path = ".".join(str(part) for part in error["loc"])
                hint = _KEY_HINTS.get(str(error["loc"][-1]))
                message = f"Unknown key '{path}'" + (f": {hint}" if hint else "")
                raise ParseError(message, e) from e
        first = errors[0]
        field = ".".join(str(part) for part in first["loc"])
        raise ConfigValidationError(
            f"Invalid value for '{field}': {first['msg']}", field=field, original_error=e
        ) from e
