"""Quadrature-space and annihilation-space forms of Gaussian operations.

Conventions used throughout the package:

* quadrature vectors are ordered xxpp, ``(x_1..x_N, p_1..p_N)``;
* ``a = (x + i p) / sqrt(2)``, hbar = 1, vacuum variance 1/2;
* a map S acts on column vectors, states transform as ``cov -> S cov S^T``;
* operator products map to matrix products in the same order.
"""

from typing import Optional, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import (
    AsymmetricShearError,
    InvalidBogoliubovError,
    InvalidModePairError,
    NonSymplecticError,
    NonUnitaryError,
    ValidationError,
)
from app.models.matrix_model import (
    BogoliubovPair,
    ComplexUnitary,
    ShearMatrix,
    SymplecticMap,
)

ArrayOrUnitary = Union[ComplexUnitary, np.ndarray]


def _tol(tol: Optional[float]) -> float:
    return settings.TOLERANCE if tol is None else tol


def max_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Largest absolute entry of a - b."""
    diff = np.asarray(a) - np.asarray(b)
    return float(np.max(np.abs(diff))) if diff.size else 0.0


def symplectic_form(modes: int) -> np.ndarray:
    """Omega = [[0, I], [-I, 0]] in xxpp ordering."""
    eye = np.eye(modes)
    zero = np.zeros((modes, modes))
    return np.block([[zero, eye], [-eye, zero]])


# ----------------------------
# Validity checks
# ----------------------------
def check_unitary(U: ArrayOrUnitary, tol: Optional[float] = None) -> float:
    """Return max |U^dagger U - I|, raising NonUnitaryError above tolerance."""
    U = _entries(U)
    deviation = max_deviation(U.conj().T @ U, np.eye(U.shape[0]))
    if deviation > _tol(tol):
        raise NonUnitaryError(deviation, _tol(tol))
    return deviation


def check_symplectic(S: Union[SymplecticMap, np.ndarray], tol: Optional[float] = None) -> float:
    """Return max |S^T Omega S - Omega|, raising NonSymplecticError above tolerance."""
    S = S.entries if isinstance(S, SymplecticMap) else np.asarray(S, dtype=float)
    omega = symplectic_form(S.shape[0] // 2)
    deviation = max_deviation(S.T @ omega @ S, omega)
    if deviation > _tol(tol):
        raise NonSymplecticError(deviation, _tol(tol))
    return deviation


def check_bogoliubov(pair: BogoliubovPair, tol: Optional[float] = None) -> float:
    """Check A A^dagger - B B^dagger = I and A B^T symmetric."""
    A, B = pair.matA, pair.matB
    deviation = max(
        max_deviation(A @ A.conj().T - B @ B.conj().T, np.eye(pair.modes)),
        max_deviation(A @ B.T, (A @ B.T).T),
    )
    if deviation > _tol(tol):
        raise InvalidBogoliubovError(deviation, _tol(tol))
    return deviation


def check_shear(K: ShearMatrix, tol: Optional[float] = None) -> float:
    deviation = max_deviation(K.entries, K.entries.T)
    if deviation > _tol(tol):
        raise AsymmetricShearError(deviation, _tol(tol))
    return deviation


# ----------------------------
# Constructors
# ----------------------------
def _check_mode(j: int, modes: int) -> None:
    if not 0 <= j < modes:
        raise ValidationError(f"mode index {j} out of range for {modes} modes", j=j, modes=modes)


def bs_symplectic(tau: float, j: int, k: int, modes: int) -> SymplecticMap:
    """Real beamsplitter [[cos, -sin], [sin, cos]] on (j, k), same on x and p blocks."""
    if j == k or not (0 <= j < modes and 0 <= k < modes):
        raise InvalidModePairError(j, k, modes)
    c, s = np.cos(tau), np.sin(tau)
    S = np.eye(2 * modes)
    for offset in (0, modes):
        a, b = j + offset, k + offset
        S[a, a], S[a, b] = c, -s
        S[b, a], S[b, b] = s, c
    return SymplecticMap(modes=modes, entries=S)


def phase_symplectic(theta: float, j: int, modes: int) -> SymplecticMap:
    """Rotation by theta in mode j's (x, p) plane."""
    _check_mode(j, modes)
    c, s = np.cos(theta), np.sin(theta)
    S = np.eye(2 * modes)
    x, p = j, j + modes
    S[x, x], S[x, p] = c, -s
    S[p, x], S[p, p] = s, c
    return SymplecticMap(modes=modes, entries=S)


def squeeze_symplectic(r: float, j: int, modes: int) -> SymplecticMap:
    """diag(e^r, e^-r) on mode j; r > 0 squeezes p."""
    _check_mode(j, modes)
    if not np.isfinite(r):
        raise ValidationError("squeeze parameter must be finite", r=r)
    S = np.eye(2 * modes)
    S[j, j] = np.exp(r)
    S[j + modes, j + modes] = np.exp(-r)
    return SymplecticMap(modes=modes, entries=S)


def shear_symplectic(K: ShearMatrix) -> SymplecticMap:
    """[[I, 0], [K, I]]: p -> p + K x."""
    n = K.modes
    S = np.block([[np.eye(n), np.zeros((n, n))], [K.entries, np.eye(n)]])
    return SymplecticMap(modes=n, entries=S)


def foursplitter_matrix() -> np.ndarray:
    """Fixed four-port interferometer mixing micronodes (a, b, c, d) of a macronode.

    Local modes are ``foursplitter_matrix() @ (A, B, C, D)`` in terms of the
    distributed modes; the inverse is the transpose.
    """
    return 0.5 * np.array(
        [
            [1.0, 1.0, -1.0, -1.0],
            [-1.0, 1.0, 1.0, -1.0],
            [1.0, 1.0, 1.0, 1.0],
            [-1.0, 1.0, -1.0, 1.0],
        ]
    )


def embed_two_mode(G: np.ndarray, j: int, k: int, modes: int) -> np.ndarray:
    """Embed a 4x4 map over (x_j, x_k, p_j, p_k) into the N-mode xxpp map."""
    if j == k or not (0 <= j < modes and 0 <= k < modes):
        raise InvalidModePairError(j, k, modes)
    idx = [j, k, j + modes, k + modes]
    S = np.eye(2 * modes)
    S[np.ix_(idx, idx)] = G
    return S


# ----------------------------
# Conversions
# ----------------------------
def passive_symplectic(U: np.ndarray) -> np.ndarray:
    """[[Re U, -Im U], [Im U, Re U]] without validation."""
    U = np.asarray(U, dtype=complex)
    return np.block([[U.real, -U.imag], [U.imag, U.real]])


def unitary_to_symplectic(U: ComplexUnitary, tol: Optional[float] = None) -> SymplecticMap:
    check_unitary(U, tol)
    return SymplecticMap(modes=U.dim, entries=passive_symplectic(U.entries))


def bogoliubov_to_symplectic(pair: BogoliubovPair, tol: Optional[float] = None) -> SymplecticMap:
    """Real map consistent with a -> A a + B a^dagger."""
    check_bogoliubov(pair, tol)
    return SymplecticMap(modes=pair.modes, entries=_bogoliubov_blocks(pair.matA, pair.matB))


def _bogoliubov_blocks(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.block(
        [
            [(A + B).real, -(A - B).imag],
            [(A + B).imag, (A - B).real],
        ]
    )


def symplectic_to_bogoliubov(S: SymplecticMap) -> BogoliubovPair:
    """Read (A, B) back from the four N x N blocks of S."""
    n = S.modes
    S11, S12 = S.entries[:n, :n], S.entries[:n, n:]
    S21, S22 = S.entries[n:, :n], S.entries[n:, n:]
    A = (S11 + S22) / 2 + 1j * (S21 - S12) / 2
    B = (S11 - S22) / 2 + 1j * (S21 + S12) / 2
    return BogoliubovPair(modes=n, matA=A, matB=B)


# ----------------------------
# Random instances
# ----------------------------
def haar_unitary(rng: np.random.Generator, modes: int) -> np.ndarray:
    """QR of a complex Gaussian matrix with the diagonal phases of R removed."""
    Z = (rng.standard_normal((modes, modes)) + 1j * rng.standard_normal((modes, modes))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_unitary(modes: int, seed: int) -> ComplexUnitary:
    if modes < 1:
        raise ValidationError("mode count must be >= 1", modes=modes)
    rng = np.random.default_rng(seed)
    return ComplexUnitary(dim=modes, entries=haar_unitary(rng, modes))


def random_bogoliubov(modes: int, seed: int, max_r: float) -> BogoliubovPair:
    """A = U cosh(r) V^dagger, B = U sinh(r) V^T with r uniform in [0, max_r]."""
    if modes < 1:
        raise ValidationError("mode count must be >= 1", modes=modes)
    if max_r <= 0:
        raise ValidationError("max_r must be > 0", max_r=max_r)
    rng = np.random.default_rng(seed)
    U = haar_unitary(rng, modes)
    V = haar_unitary(rng, modes)
    r = rng.uniform(0.0, max_r, size=modes)
    A = U @ np.diag(np.cosh(r)) @ V.conj().T
    B = U @ np.diag(np.sinh(r)) @ V.T
    return BogoliubovPair(modes=modes, matA=A, matB=B)


def _entries(U: ArrayOrUnitary) -> np.ndarray:
    return U.entries if isinstance(U, ComplexUnitary) else np.asarray(U, dtype=complex)


def random_shear(modes: int, seed: int) -> ShearMatrix:
    """Symmetric K with standard normal entries."""
    if modes < 1:
        raise ValidationError("mode count must be >= 1", modes=modes)
    G = np.random.default_rng(seed).standard_normal((modes, modes))
    return ShearMatrix(modes=modes, entries=(G + G.T) / 2)
