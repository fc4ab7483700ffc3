from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from app.models.schedule_model import Schedule

Command = Literal["compile", "verify", "simulate", "layout", "random"]
TargetKind = Literal["unitary", "bogoliubov", "shear"]
LayoutKind = Literal["triangular", "rectangular"]
OutputFormat = Literal["json", "ascii", "svg"]


# -------------------------
# Run configuration
# -------------------------
class RunConfig(BaseModel):
    """Parsed command-line configuration."""

    command: Command
    target_kind: TargetKind = Field(default="unitary")
    layout_kind: LayoutKind = Field(default="triangular")
    tolerance: float = Field(default=1e-8, description="Acceptance tolerance")
    r_db: float = Field(default=15.0, description="Resource squeezing in dB")
    sweep: List[float] = Field(default_factory=list, description="r_db values of a sweep")
    seed: int = Field(default=0)
    modes: int = Field(default=2, ge=1, description="Mode count of random targets")
    input_path: Optional[str] = Field(default=None)
    target_path: Optional[str] = Field(default=None)
    output_path: Optional[str] = Field(default=None)
    output_format: OutputFormat = Field(default="json")

    @field_validator("tolerance")
    @classmethod
    def _positive_tolerance(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("tolerance must be > 0")
        return v

    @field_validator("r_db")
    @classmethod
    def _non_negative_r(cls, v: float) -> float:
        if v < 0:
            raise ValueError("r_db must be >= 0")
        return v

    @field_validator("sweep")
    @classmethod
    def _non_negative_sweep(cls, v: List[float]) -> List[float]:
        if any(r < 0 for r in v):
            raise ValueError("sweep values must be >= 0")
        return v


# -------------------------
# Reports
# -------------------------
class RunReport(BaseModel):
    """Result of simulating one schedule at finite squeezing."""

    r_db: float
    seed: int
    output_mean: List[float]
    output_cov: List[List[float]]
    target_distance_frobenius: float
    nullifier_variances: List[float]


class VerifyReport(BaseModel):
    modes: int
    max_deviation: float
    tolerance: float
    within_tolerance: bool


class CompileSummary(BaseModel):
    """Instruction counts per role and the lattice footprint."""

    modes: int
    lattice_period: int
    instructions: int
    roles: Dict[str, int]
    rows: int
    columns: int


# -------------------------
# HTTP request bodies
# -------------------------
class CompileRequest(BaseModel):
    target_kind: TargetKind = Field(default="unitary")
    layout: LayoutKind = Field(default="triangular")
    target: Dict[str, Any] = Field(..., description="Target matrix in its JSON format")


class CompileResponse(BaseModel):
    summary: CompileSummary
    schedule: Schedule


class VerifyRequest(BaseModel):
    schedule: Schedule
    target: Dict[str, Any] = Field(..., description="SymplecticMap JSON or a target matrix")
    target_kind: Optional[TargetKind] = Field(default=None)
    tolerance: float = Field(default=1e-8, gt=0)


class SimulateRequest(BaseModel):
    schedule: Schedule
    r_db: float = Field(default=15.0, ge=0)
    seed: int = Field(default=0)
