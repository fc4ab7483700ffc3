"""Single-macronode algebra.

A macronode measurement teleports its two inputs (arriving on the distributed
modes B and D) through a Mach-Zehnder arrangement: a half beamsplitter mixes
them into two arms, each arm is teleported with the tunable map
``V(theta_b, theta_a)``, and a second half beamsplitter recombines the arms.
Two-mode maps are ordered (x_B, x_D, p_B, p_D).
"""

from typing import Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import SingularBasisError
from app.models.angles_model import MacronodeAngles, MeasurementPair
from app.models.matrix_model import TwoModeMap

HALF_PI = np.pi / 2

# Arm mixer: arm B = (B - D)/sqrt2, arm D = (B + D)/sqrt2, same on x and p.
_ARM_MIX = np.kron(np.eye(2), np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2))
_SWAP = np.kron(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _sin_delta(pair: MeasurementPair, threshold: Optional[float], arm: Optional[str]) -> float:
    threshold = settings.SINGULARITY_THRESHOLD if threshold is None else threshold
    delta = np.sin(pair.theta_b - pair.theta_a)
    if abs(delta) <= threshold:
        raise SingularBasisError(float(delta), threshold, arm)
    return float(delta)


def v_matrix(
    pair: MeasurementPair, threshold: Optional[float] = None, arm: Optional[str] = None
) -> np.ndarray:
    """Map imparted by teleportation with homodyne angles (theta_b, theta_a)."""
    delta = _sin_delta(pair, threshold, arm)
    tb, ta = pair.theta_b, pair.theta_a
    left = np.array([[np.cos(tb), np.cos(ta)], [np.sin(tb), np.sin(ta)]])
    right = np.array([[np.sin(ta), np.cos(ta)], [np.sin(tb), np.cos(tb)]])
    return left @ right / delta


def v_decompose(pair: MeasurementPair, threshold: Optional[float] = None) -> Tuple[float, float]:
    """Return (theta_plus, tan(theta_minus)).

    ``v_matrix(pair) == rotation(theta_plus - pi/2) @ diag(k, 1/k) @ rotation(theta_plus)``
    with ``k = tan(theta_minus)``.
    """
    _sin_delta(pair, threshold, None)
    theta_plus = (pair.theta_b + pair.theta_a) / 2
    theta_minus = (pair.theta_b - pair.theta_a) / 2
    return float(theta_plus), float(np.tan(theta_minus))


def squeeze_factor(k: float) -> np.ndarray:
    return np.diag([k, 1.0 / k])


def feedforward_matrix(pair: MeasurementPair, threshold: Optional[float] = None) -> np.ndarray:
    """Coefficient of the arm's two outcomes in the teleported (x, p)."""
    delta = _sin_delta(pair, threshold, None)
    tb, ta = pair.theta_b, pair.theta_a
    return -np.sqrt(2) / delta * np.array([[np.cos(tb), np.cos(ta)], [np.sin(tb), np.sin(ta)]])


def macronode_map(angles: MacronodeAngles, threshold: Optional[float] = None) -> TwoModeMap:
    """Two-mode map of one macronode measurement."""
    arms = np.zeros((4, 4))
    arms[np.ix_([0, 2], [0, 2])] = v_matrix(angles.arm_b, threshold, arm="B")
    arms[np.ix_([1, 3], [1, 3])] = v_matrix(angles.arm_d, threshold, arm="D")
    return TwoModeMap(entries=_ARM_MIX.T @ arms @ _ARM_MIX)


def output_exchange() -> np.ndarray:
    """Permutation exchanging the two modes of a TwoModeMap."""
    return _SWAP.copy()


# ----------------------------
# Angle solvers
# ----------------------------
def common_arm(pair: MeasurementPair) -> MacronodeAngles:
    """Same pair on both arms: the map is V on each mode, no mixing."""
    return MacronodeAngles.from_arms(pair, pair)


def angles_for_identity() -> MacronodeAngles:
    return common_arm(MeasurementPair(theta_b=HALF_PI, theta_a=0.0))


def angles_for_phase(phi: float) -> MacronodeAngles:
    """Common rotation R(phi) on both modes."""
    theta = phi / 2
    return common_arm(MeasurementPair(theta_b=theta + HALF_PI, theta_a=theta))


def angles_for_beamsplitter(tau: float, phi: float) -> MacronodeAngles:
    """Angles realising e^{i phi} [[cos tau, i sin tau], [i sin tau, cos tau]]."""
    theta_1 = (phi - tau) / 2
    theta_2 = (phi + tau) / 2
    return MacronodeAngles(
        theta_a=theta_1,
        theta_b=theta_1 + HALF_PI,
        theta_c=theta_2,
        theta_d=theta_2 + HALF_PI,
    )


def squeeze_pair(r: float, threshold: Optional[float] = None) -> MeasurementPair:
    """Pair (theta + pi/2, -theta) giving R(-pi/4) diag(e^r, e^-r) R(pi/4)."""
    theta = float(np.arctan(np.exp(r)) - np.pi / 4)
    pair = MeasurementPair(theta_b=theta + HALF_PI, theta_a=-theta)
    _sin_delta(pair, threshold, None)
    return pair


def angles_for_squeeze(r: float, threshold: Optional[float] = None) -> MacronodeAngles:
    return common_arm(squeeze_pair(r, threshold))


def angles_for_swap(inner_b: MeasurementPair, inner_d: MeasurementPair) -> MacronodeAngles:
    """Flip the B arm so the outputs exchange: map = output_exchange() @ unswapped map."""
    _sin_delta(inner_b, None, "B")
    _sin_delta(inner_d, None, "D")
    return MacronodeAngles.from_arms(inner_b.flipped(), inner_d)


def angles_for_shear_pair(kappa: float, lam: float) -> MacronodeAngles:
    """x-block identity and p-x coupling [[kappa, lam], [lam, kappa]]."""
    return MacronodeAngles(
        theta_a=float(np.arctan((kappa - lam) / 2)),
        theta_b=HALF_PI,
        theta_c=float(np.arctan((kappa + lam) / 2)),
        theta_d=HALF_PI,
    )


def angles_for_single_shear(kappa: float, x_invariant: bool = True) -> MeasurementPair:
    """[[1, 0], [kappa, 1]] when x is invariant, [[1, -kappa], [0, 1]] otherwise."""
    theta = float(np.arctan(kappa / 2))
    if x_invariant:
        return MeasurementPair(theta_b=HALF_PI, theta_a=theta)
    return MeasurementPair(theta_b=theta + HALF_PI, theta_a=0.0)
