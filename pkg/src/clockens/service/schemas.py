"""Pydantic request/response models for the experiment service.

RunConfig is the single configuration surface shared by the HTTP API and
the command-line client; its JSON schema (with defaults and units) is what
`clockens schema` prints.
"""

from __future__ import annotations

import json
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

EXPERIMENTS = (
    "canonical",
    "microcanonical",
    "compare",
    "classical-hamilton",
    "classical-maupertuis",
    "repar-check",
    "projector-xcheck",
)

QUANTUM_EXPERIMENTS = {"canonical", "microcanonical", "compare", "projector-xcheck"}
CLASSICAL_EXPERIMENTS = {"classical-hamilton", "classical-maupertuis", "repar-check"}


class OscillatorModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["truncated_oscillator"] = "truncated_oscillator"
    omega: float = Field(1.0, gt=0, description="Level spacing (energy units, hbar = 1)")
    n_levels: int = Field(8, ge=1, le=512, description="Number of retained levels")


class TwoLevelModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["two_level"] = "two_level"
    e0: float = Field(0.0, description="Lower level energy")
    e1: float = Field(1.0, description="Upper level energy")


class BoxModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["particle_in_box"] = "particle_in_box"
    length: float = Field(3.0, gt=0, description="Box length (units with hbar = 1)")
    n_levels: int = Field(8, ge=1, le=512)
    mass: float = Field(1.0, gt=0)


class RandomHermitianModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["random_hermitian"] = "random_hermitian"
    dim: int = Field(6, ge=1, le=512)
    seed: int | None = Field(
        None, description="Model seed; falls back to the run seed when omitted"
    )


class DiagonalModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["explicit_diagonal"] = "explicit_diagonal"
    levels: list[float] = Field(min_length=1, description="Energy levels, any order")


QuantumModel = Annotated[
    Union[OscillatorModel, TwoLevelModel, BoxModel, RandomHermitianModel, DiagonalModel],
    Field(discriminator="kind"),
]


class ClassicalModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    potential: Literal["harmonic", "double_well", "morse", "free"] = Field(
        "harmonic", description="Potential shape for the point particle"
    )
    mass: float = Field(1.0, gt=0)
    dof: int = Field(1, ge=1, le=8, description="Degrees of freedom")
    omega: float = Field(1.0, gt=0, description="harmonic: angular frequency")
    height: float = Field(1.0, gt=0, description="double_well: barrier scale")
    half_width: float = Field(1.0, gt=0, description="double_well: minima at +-half_width")
    depth: float = Field(1.0, gt=0, description="morse: well depth")
    width: float = Field(1.0, gt=0, description="morse: inverse length scale")
    center: float = Field(0.0, description="morse: minimum position")


class ClockConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n_sites: int = Field(64, ge=2, le=2048, description="Clock grid sites")
    period: float = Field(gt=0, description="Total clock extent (time units)")


class RegularizationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scheme: Literal["gaussian_broadening", "alpha_quadrature"] = "gaussian_broadening"
    sigma_e: float | Literal["auto"] = Field(
        "auto",
        description="Delta width in energy units; auto = 4 x clock momentum spacing",
    )
    alpha_max: float | Literal["auto"] = Field(
        "auto", description="Quadrature half-window; auto = clock period / 2"
    )
    n_nodes: int = Field(512, ge=8, description="Quadrature trapezoid nodes")
    window: Literal["gaussian"] = "gaussian"


class BetaGridConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    start: float = Field(0.1, gt=0, description="Smallest inverse temperature")
    stop: float = Field(10.0, gt=0, description="Largest inverse temperature")
    num: int = Field(16, ge=1, le=4096)
    spacing: Literal["log", "linear"] = "log"


class GridsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    beta: BetaGridConfig | list[float] = Field(default_factory=BetaGridConfig)
    energy: Literal["auto"] | list[float] = Field(
        "auto", description="Energy grid; auto = clock lattice within spectrum +- 6 sigma"
    )
    sigma_span: tuple[float, float] = Field(
        (0.0, 6.283185307179586), description="Evolution-parameter interval"
    )
    n_steps: int | Literal["auto"] = Field(
        "auto", description="Integrator steps; auto = max(2048, 512 per unit span)"
    )


class BoundaryConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    q0: list[float] = Field(default_factory=lambda: [1.0], description="Initial position")
    p0: list[float] = Field(default_factory=lambda: [0.0], description="Initial momentum")
    q_a: list[float] = Field(default_factory=lambda: [0.0], description="Shooting start")
    q_b: list[float] = Field(default_factory=lambda: [1.0], description="Shooting target")
    energy: float = Field(1.0, description="Fixed energy for the shooting problem")
    init_guess: list[float] = Field(
        default_factory=lambda: [1.0], description="Initial momentum direction hint"
    )


class LapseConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["unit", "sinusoidal"] = "unit"
    amplitude: float = Field(0.5, gt=-1, lt=1, description="sinusoidal: modulation depth")
    frequency: float = Field(1.0, gt=0, description="sinusoidal: angular frequency in sigma")


class RunConfig(BaseModel):
    """Complete description of one experiment run."""

    model_config = ConfigDict(extra="forbid")

    experiment: Literal[
        "canonical",
        "microcanonical",
        "compare",
        "classical-hamilton",
        "classical-maupertuis",
        "repar-check",
        "projector-xcheck",
    ]
    model: QuantumModel | ClassicalModel = Field(
        default_factory=TwoLevelModel,
        description="Quantum Hamiltonian (kind=...) or classical system (potential=...)",
    )
    clock: ClockConfig | Literal["auto"] = Field(
        "auto", description="Clock grid; auto sizes the period from the spectrum"
    )
    regularization: RegularizationConfig = Field(default_factory=RegularizationConfig)
    grids: GridsConfig = Field(default_factory=GridsConfig)
    boundary: BoundaryConfig = Field(default_factory=BoundaryConfig)
    lapse: LapseConfig = Field(default_factory=LapseConfig)
    lapse2: LapseConfig = Field(
        default_factory=lambda: LapseConfig(kind="sinusoidal"),
        description="Second lapse profile for repar-check",
    )
    output: str | None = Field(None, description="Output path prefix (client side)")
    format: Literal["csv", "json"] = "csv"
    seed: int = Field(0, description="Seed for any randomized model")

    @model_validator(mode="after")
    def _experiment_matches_model(self) -> "RunConfig":
        is_classical = isinstance(self.model, ClassicalModel)
        if self.experiment in QUANTUM_EXPERIMENTS and is_classical:
            raise ValueError(f"experiment {self.experiment!r} needs a quantum model")
        if self.experiment in CLASSICAL_EXPERIMENTS and not is_classical:
            raise ValueError(f"experiment {self.experiment!r} needs a classical model")
        return self


class ResolvedClock(BaseModel):
    n_sites: int
    period: float


class ResolvedRegularization(BaseModel):
    scheme: str
    sigma_e: float
    alpha_max: float | None = None
    n_nodes: int | None = None
    window: str = "gaussian"


class ResolvedRun(BaseModel):
    """Echo of the configuration with every 'auto' replaced by its value."""

    experiment: str
    seed: int
    model: dict
    clock: ResolvedClock | None = None
    regularization: ResolvedRegularization | None = None
    n_steps: int | None = None
    sigma_span: tuple[float, float] | None = None


class ZTable(BaseModel):
    beta: list[float]
    z_kernel: list[float]
    z_direct: list[float]
    rel_err: list[float]


class OmegaTable(BaseModel):
    energy: list[float]
    omega_kernel: list[float]
    omega_direct: list[float]
    abs_err: list[float]


class CanonicalResponse(BaseModel):
    resolved: ResolvedRun
    eigenvalues: list[float]
    z: ZTable
    max_rel_error_z: float


class MicrocanonicalResponse(BaseModel):
    resolved: ResolvedRun
    eigenvalues: list[float]
    sigma_used: float
    omega: OmegaTable
    max_abs_error_omega: float


class CompareResponse(BaseModel):
    resolved: ResolvedRun
    eigenvalues: list[float]
    sigma_used: float
    z: ZTable
    omega: OmegaTable
    max_rel_error_z: float
    max_abs_error_omega: float


class TrajectoryTable(BaseModel):
    sigma: list[float]
    q: list[list[float]]
    p: list[list[float]]
    t: list[float]
    pi_t: list[float]
    h_value: list[float]


class ActionsRecord(BaseModel):
    parametrized: float
    hamilton: float | None = None
    maupertuis_jacobi: float | None = None
    routh_residual: float


class HamiltonResponse(BaseModel):
    resolved: ResolvedRun
    trajectory: TrajectoryTable
    actions: ActionsRecord
    energy_drift: float
    pi_t_exactly_constant: bool


class MaupertuisResponse(BaseModel):
    resolved: ResolvedRun
    p_a: list[float]
    time_of_flight: float
    endpoint_residual: float
    energy_drift: float
    trajectory: TrajectoryTable


class ReparCheckResponse(BaseModel):
    resolved: ResolvedRun
    lapse1: str
    lapse2: str
    final_state_difference: float


class ProjectorXcheckResponse(BaseModel):
    resolved: ResolvedRun
    max_abs_difference: float
    extended_dim: int


class ErrorRecord(BaseModel):
    type: str
    message: str
    experiment: str | None = None
    operation: str | None = None


def config_schema_text() -> str:
    """Full JSON schema of RunConfig, with defaults and units, as text."""
    return json.dumps(RunConfig.model_json_schema(), indent=2, sort_keys=True)


def floats(values) -> list[float]:
    return [float(v) for v in np.asarray(values).ravel()]
