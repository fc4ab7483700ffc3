from typing import List, Literal, Optional, Set

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

Rail = Literal["a", "b", "c", "d"]
RAILS: tuple[Rail, ...] = ("a", "b", "c", "d")


class PulseId(BaseModel):
    """A micronode (rail, t). As a feedforward or injection target the rail
    letter names the distributed mode of macronode t (b -> B, d -> D)."""

    model_config = ConfigDict(frozen=True)

    rail: Rail = Field(..., description="Spatial rail a, b, c or d")
    t: int = Field(..., description="Time index")


class HomodyneRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    pulse: PulseId
    angle: float = Field(..., description="Measured quadrature p(angle) = p cos + x sin")
    outcome: float


class GaussianState(BaseModel):
    """Mean and covariance over a set of modes, xxpp ordering, vacuum variance 1/2.

    For lattice states ``mode_table[i]`` is the micronode stored in slot i and
    ``lattice_period``/``t_min``/``t_max`` describe the window. Plain k-mode
    states (program inputs and outputs) leave the table empty.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    mean: np.ndarray = Field(..., description="Length 2M mean vector")
    cov: np.ndarray = Field(..., description="2M x 2M covariance matrix")
    mode_table: List[PulseId] = Field(default_factory=list)
    lattice_period: Optional[int] = Field(default=None)
    t_min: Optional[int] = Field(default=None)
    t_max: Optional[int] = Field(default=None)
    measured: Set[int] = Field(default_factory=set, description="Consumed macronodes")

    @property
    def modes(self) -> int:
        return self.mean.shape[0] // 2

    def slot(self, pulse: PulseId) -> int:
        return self.mode_table.index(pulse)

    def copy_state(self) -> "GaussianState":
        return self.model_copy(
            update={
                "mean": self.mean.copy(),
                "cov": self.cov.copy(),
                "mode_table": list(self.mode_table),
                "measured": set(self.measured),
            }
        )

    @classmethod
    def vacuum(cls, modes: int) -> "GaussianState":
        return cls(mean=np.zeros(2 * modes), cov=0.5 * np.eye(2 * modes))
