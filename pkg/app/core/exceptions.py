from typing import Any, Dict, Optional

# ==========================================================
# Domain exceptions
# ----------------------------------------------------------
# Every error carries a CLI exit code and an HTTP status so
# the command line and the API report failures the same way.
#   exit 1 -> validation / tolerance failure
#   exit 2 -> structural / parse / configuration failure
# ==========================================================


class QRLError(Exception):
    """Base class for all compiler, verifier and simulator errors."""

    exit_code: int = 1
    status_code: int = 422

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = detail

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.message, "status_code": self.status_code, "detail": self.detail}


# -------------------------
# Validation failures
# -------------------------
class ValidationError(QRLError):
    """An input matrix or parameter failed a validity check."""


class NonUnitaryError(ValidationError):
    def __init__(self, max_deviation: float, tol: float):
        super().__init__(
            f"matrix is not unitary: max deviation {max_deviation:.3e} > {tol:.3e}",
            max_deviation=max_deviation,
            tolerance=tol,
        )
        self.max_deviation = max_deviation


class NonSymplecticError(ValidationError):
    def __init__(self, max_deviation: float, tol: float):
        super().__init__(
            f"matrix is not symplectic: max deviation {max_deviation:.3e} > {tol:.3e}",
            max_deviation=max_deviation,
            tolerance=tol,
        )
        self.max_deviation = max_deviation


class InvalidBogoliubovError(ValidationError):
    def __init__(self, max_deviation: float, tol: float):
        super().__init__(
            f"(A, B) is not a Bogoliubov pair: max deviation {max_deviation:.3e} > {tol:.3e}",
            max_deviation=max_deviation,
            tolerance=tol,
        )
        self.max_deviation = max_deviation


class AsymmetricShearError(ValidationError):
    def __init__(self, max_deviation: float, tol: float):
        super().__init__(
            f"shear matrix is not symmetric: max deviation {max_deviation:.3e} > {tol:.3e}",
            max_deviation=max_deviation,
            tolerance=tol,
        )
        self.max_deviation = max_deviation


class InvalidModePairError(ValidationError):
    def __init__(self, j: int, k: int, modes: int):
        super().__init__(
            f"invalid mode pair ({j}, {k}) for {modes} modes", j=j, k=k, modes=modes
        )


class ToleranceExceededError(ValidationError):
    """A verified map deviates from its target by more than the tolerance."""

    def __init__(self, max_deviation: float, tol: float):
        super().__init__(
            f"deviation {max_deviation:.3e} exceeds tolerance {tol:.3e}",
            max_deviation=max_deviation,
            tolerance=tol,
        )
        self.max_deviation = max_deviation


class SingularBasisError(QRLError):
    """Measurement pair with sin(theta_b - theta_a) ~ 0 demolishes the input."""

    def __init__(self, sin_delta: float, threshold: float, arm: Optional[str] = None):
        where = f" on arm {arm}" if arm else ""
        super().__init__(
            f"singular measurement basis{where}: |sin(theta_b - theta_a)| = "
            f"{abs(sin_delta):.3e} <= {threshold:.3e}",
            sin_delta=sin_delta,
            threshold=threshold,
            arm=arm,
        )
        self.arm = arm


class InternalConsistencyError(QRLError):
    """A decomposition pass failed to reach its numerical target."""

    status_code = 500


# -------------------------
# Structural failures
# -------------------------
class StructuralError(QRLError):
    """A component list or schedule is malformed."""

    exit_code = 2
    status_code = 400


class ParseError(StructuralError):
    """An input file could not be parsed into the expected format."""


# -------------------------
# Lattice failures
# -------------------------
class ConfigurationError(QRLError):
    exit_code = 2
    status_code = 400


class LatticeRangeError(QRLError):
    exit_code = 2
    status_code = 400


class StateError(QRLError):
    exit_code = 2
    status_code = 409
