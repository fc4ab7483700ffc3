from typing import List

from pydantic import BaseModel, ConfigDict, Field


class MeasurementPair(BaseModel):
    """Homodyne angles (theta_b, theta_a) of one teleportation arm, in radians."""

    model_config = ConfigDict(frozen=True)

    theta_b: float = Field(..., description="Angle measured on the second micronode of the arm")
    theta_a: float = Field(..., description="Angle measured on the first micronode of the arm")

    def flipped(self) -> "MeasurementPair":
        return MeasurementPair(theta_b=self.theta_a, theta_a=self.theta_b)


class MacronodeAngles(BaseModel):
    """Homodyne angles consumed at one macronode, micronodes a, b, c, d."""

    model_config = ConfigDict(frozen=True)

    theta_a: float = Field(..., description="Angle on micronode a (B arm)")
    theta_b: float = Field(..., description="Angle on micronode b (B arm)")
    theta_c: float = Field(..., description="Angle on micronode c (D arm)")
    theta_d: float = Field(..., description="Angle on micronode d (D arm)")

    @classmethod
    def from_arms(cls, arm_b: MeasurementPair, arm_d: MeasurementPair) -> "MacronodeAngles":
        return cls(
            theta_a=arm_b.theta_a,
            theta_b=arm_b.theta_b,
            theta_c=arm_d.theta_a,
            theta_d=arm_d.theta_b,
        )

    @classmethod
    def from_list(cls, values: List[float]) -> "MacronodeAngles":
        """Build from the wire order [theta_a, theta_b, theta_c, theta_d]."""
        if len(values) != 4:
            raise ValueError("macronode angles need exactly four values")
        a, b, c, d = (float(v) for v in values)
        return cls(theta_a=a, theta_b=b, theta_c=c, theta_d=d)

    def as_list(self) -> List[float]:
        return [self.theta_a, self.theta_b, self.theta_c, self.theta_d]

    @property
    def arm_b(self) -> MeasurementPair:
        return MeasurementPair(theta_b=self.theta_b, theta_a=self.theta_a)

    @property
    def arm_d(self) -> MeasurementPair:
        return MeasurementPair(theta_b=self.theta_d, theta_a=self.theta_c)
