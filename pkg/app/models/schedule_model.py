from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from app.models.angles_model import MacronodeAngles

# ==========================================================
# Schedule models
# ----------------------------------------------------------
# A schedule is the contract between compile, lattice and cli.
# Sites are macronode indices t; the horizontal neighbour is
# t + 1 and the vertical neighbour is t + lattice_period.
# Wires entering on arm "b" arrive from t - 1, wires on arm
# "d" arrive from t - lattice_period (or are program inputs).
# ==========================================================

Role = Literal[
    "beamsplitter", "phase", "squeeze", "shear-pair", "shear", "identity", "input", "output"
]
Arm = Literal["b", "d"]
Direction = Literal["horizontal", "vertical"]


class WirePort(BaseModel):
    model_config = ConfigDict(frozen=True)

    wire: int = Field(..., ge=0, description="Wire id")
    arm: Arm = Field(..., description="Input slot: b (from t-1) or d (from t-N)")


class WireLink(BaseModel):
    model_config = ConfigDict(frozen=True)

    wire: int = Field(..., ge=0, description="Wire id")
    direction: Direction = Field(..., description="horizontal (t+1) or vertical (t+N)")


class MacronodeInstruction(BaseModel):
    """Measurement of one macronode with its routing."""

    model_config = ConfigDict(frozen=True)

    site: int = Field(..., description="Macronode index t")
    role: Role = Field(..., description="What the macronode implements")
    angles: MacronodeAngles = Field(..., description="[theta_a, theta_b, theta_c, theta_d]")
    swap: bool = Field(default=False, description="Outputs exchanged (B to vertical, D to horizontal)")
    wires_in: List[WirePort] = Field(default_factory=list, max_length=2)
    wires_out: List[WireLink] = Field(default_factory=list, max_length=2)

    @field_validator("angles", mode="before")
    @classmethod
    def _angles_from_list(cls, v):
        if isinstance(v, (list, tuple)):
            return MacronodeAngles.from_list(list(v))
        return v

    @field_serializer("angles")
    def _angles_to_list(self, angles: MacronodeAngles) -> List[float]:
        return angles.as_list()


class Schedule(BaseModel):
    """Placed and wired macronode program for N modes."""

    model_config = ConfigDict(frozen=True)

    modes: int = Field(..., ge=1, description="Number of logical modes N")
    lattice_period: int = Field(..., ge=1, description="Vertical neighbour offset N_lat")
    instructions: List[MacronodeInstruction] = Field(default_factory=list)
    input_wires: List[int] = Field(..., description="Wire id of each input mode")
    output_wires: List[int] = Field(..., description="Wire id of each output mode")

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        return cls.model_validate_json(text)

    def position(self, site: int) -> tuple[int, int]:
        """(row, column) of a site on the lattice grid."""
        return divmod(site, self.lattice_period)
