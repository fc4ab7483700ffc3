from typing import Any, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# ==========================================================
# Matrix value types
# ----------------------------------------------------------
# Quadrature ordering is always xxpp: (x_1..x_N, p_1..p_N).
# Arrays are stored read-only; validity against a tolerance
# (unitarity, symplecticity) is checked by symplectic_service.
# ==========================================================


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class _ArrayModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


# -------------------------
# Passive and active maps
# -------------------------
class ComplexUnitary(_ArrayModel):
    """N x N complex matrix of a passive beamsplitter network."""

    dim: int = Field(..., ge=1, description="Number of modes N")
    entries: np.ndarray = Field(..., description="dim x dim complex matrix")

    @field_validator("entries", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> np.ndarray:
        return _frozen(np.asarray(v, dtype=complex))

    @model_validator(mode="after")
    def _check_shape(self):
        if self.entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries must have shape ({self.dim}, {self.dim})")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("entries must be finite")
        return self

    @classmethod
    def from_array(cls, U: np.ndarray) -> "ComplexUnitary":
        U = np.asarray(U, dtype=complex)
        return cls(dim=U.shape[0], entries=U)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[float(z.real), float(z.imag)] for z in self.entries.ravel()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ComplexUnitary":
        dim = int(data["dim"])
        return cls(dim=dim, entries=_complex_entries(data["entries"], dim))


class SymplecticMap(_ArrayModel):
    """2N x 2N real map on the xxpp quadrature vector."""

    modes: int = Field(..., ge=0, description="Number of modes N")
    entries: np.ndarray = Field(..., description="2N x 2N real matrix, xxpp ordering")

    @field_validator("entries", mode="before")
    @classmethod
    def _as_real(cls, v: Any) -> np.ndarray:
        return _frozen(np.asarray(v, dtype=float))

    @model_validator(mode="after")
    def _check_shape(self):
        n = 2 * self.modes
        if self.entries.shape != (n, n):
            raise ValueError(f"entries must have shape ({n}, {n})")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("entries must be finite")
        return self

    @classmethod
    def from_array(cls, S: np.ndarray) -> "SymplecticMap":
        S = np.asarray(S, dtype=float)
        return cls(modes=S.shape[0] // 2, entries=S)

    def to_json_dict(self) -> dict:
        return {"modes": self.modes, "entries": [float(v) for v in self.entries.ravel()]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SymplecticMap":
        modes = int(data["modes"])
        entries = np.asarray(data["entries"], dtype=float).reshape(2 * modes, 2 * modes)
        return cls(modes=modes, entries=entries)


class TwoModeMap(_ArrayModel):
    """4 x 4 real map of one macronode over (x_B, x_D, p_B, p_D)."""

    entries: np.ndarray = Field(..., description="4 x 4 real matrix")

    @field_validator("entries", mode="before")
    @classmethod
    def _as_real(cls, v: Any) -> np.ndarray:
        array = np.asarray(v, dtype=float)
        if array.shape != (4, 4):
            raise ValueError("a two-mode map is 4 x 4")
        return _frozen(array)


class BogoliubovPair(_ArrayModel):
    """Annihilation-space form a -> A a + B a^dagger of a Gaussian unitary."""

    modes: int = Field(..., ge=1, description="Number of modes N")
    matA: np.ndarray = Field(..., description="N x N complex matrix A")
    matB: np.ndarray = Field(..., description="N x N complex matrix B")

    @field_validator("matA", "matB", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> np.ndarray:
        return _frozen(np.asarray(v, dtype=complex))

    @model_validator(mode="after")
    def _check_shape(self):
        for name in ("matA", "matB"):
            if getattr(self, name).shape != (self.modes, self.modes):
                raise ValueError(f"{name} must have shape ({self.modes}, {self.modes})")
        return self

    def to_json_dict(self) -> dict:
        return {
            "modes": self.modes,
            "A": [[float(z.real), float(z.imag)] for z in self.matA.ravel()],
            "B": [[float(z.real), float(z.imag)] for z in self.matB.ravel()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BogoliubovPair":
        modes = int(data["modes"])
        return cls(
            modes=modes,
            matA=_complex_entries(data["A"], modes),
            matB=_complex_entries(data["B"], modes),
        )


class SqueezeParams(BaseModel):
    """Per-mode squeeze parameters; r > 0 squeezes p, r < 0 squeezes x."""

    model_config = ConfigDict(frozen=True)

    values: List[float] = Field(..., description="Squeeze parameter r per mode")

    @field_validator("values")
    @classmethod
    def _finite(cls, v: List[float]) -> List[float]:
        if not all(np.isfinite(v)):
            raise ValueError("squeeze parameters must be finite")
        return v


class ShearMatrix(_ArrayModel):
    """Real symmetric K of the multimode shear exp(i/2 sum K_jk x_j x_k)."""

    modes: int = Field(..., ge=1, description="Number of modes N")
    entries: np.ndarray = Field(..., description="N x N real matrix K")

    @field_validator("entries", mode="before")
    @classmethod
    def _as_real(cls, v: Any) -> np.ndarray:
        return _frozen(np.asarray(v, dtype=float))

    @model_validator(mode="after")
    def _check_shape(self):
        if self.entries.shape != (self.modes, self.modes):
            raise ValueError(f"entries must have shape ({self.modes}, {self.modes})")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("entries must be finite")
        return self

    def to_json_dict(self) -> dict:
        return {"modes": self.modes, "entries": [float(v) for v in self.entries.ravel()]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ShearMatrix":
        modes = int(data["modes"])
        entries = np.asarray(data["entries"], dtype=float).reshape(modes, modes)
        return cls(modes=modes, entries=entries)


def _complex_entries(raw: Any, dim: int) -> np.ndarray:
    """Row-major [[re, im], ...] (flat or nested by row) -> dim x dim complex."""
    pairs = np.asarray(raw, dtype=float).reshape(-1, 2)
    if pairs.shape[0] != dim * dim:
        raise ValueError(f"expected {dim * dim} complex entries, got {pairs.shape[0]}")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
