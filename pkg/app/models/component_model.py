from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Element kinds of a decomposed beamsplitter network (modes 0-indexed, j > k):
#   C(j,k,tau,phi) = B'_jk(tau) R_j(phi)
#   S(j,k,tau,phi) = R_j(phi) B'_jk(tau)
#   T(j,k,tau,phi) = R_j(phi) R_k(phi) B'_jk(tau)
#   R(j,phi)       = phase shift e^{i phi} on mode j
# with B'_jk(tau) = [[cos tau, i sin tau], [i sin tau, cos tau]] on (j, k).
ComponentKind = Literal["C", "S", "T", "R"]


class Component(BaseModel):
    """One element of a ComponentList."""

    model_config = ConfigDict(frozen=True)

    kind: ComponentKind = Field(..., description="Element type")
    j: int = Field(..., ge=0, description="First (higher) mode index")
    k: Optional[int] = Field(default=None, ge=0, description="Second mode index, None for R")
    tau: float = Field(default=0.0, description="Beamsplitter angle in radians")
    phi: float = Field(default=0.0, description="Phase in radians")

    @model_validator(mode="after")
    def _check_modes(self):
        if self.kind == "R":
            if self.k is not None:
                raise ValueError("a phase element acts on a single mode")
        elif self.k is None or self.k == self.j:
            raise ValueError(f"{self.kind} element needs two distinct modes")
        return self

    def label(self) -> str:
        if self.kind == "R":
            return f"R{self.j}"
        return f"{self.kind}{self.j}{self.k}"


# Application order: list[0] is the leftmost factor, the last element acts first.
ComponentList = List[Component]


def phase(j: int, phi: float) -> Component:
    return Component(kind="R", j=j, phi=phi)


def element(kind: ComponentKind, j: int, k: int, tau: float, phi: float) -> Component:
    return Component(kind=kind, j=j, k=k, tau=tau, phi=phi)
