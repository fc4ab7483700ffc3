"""Lowering passes for passive networks and Gaussian unitaries.

Beamsplitter networks go through ``reck_decompose`` -> ``c_to_s`` ->
``s_to_t`` (triangular mesh) or ``clements_decompose`` (rectangular mesh).
General Gaussian unitaries are first split by ``bloch_messiah``.
Each pass output is checked against ``recompose``.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import InternalConsistencyError, StructuralError
from app.models.component_model import Component, ComponentList, element, phase
from app.models.matrix_model import BogoliubovPair, ComplexUnitary, SqueezeParams
from app.services.symplectic_service import check_bogoliubov, check_unitary, max_deviation
from app.utils.logger import logger


# ----------------------------
# Component algebra
# ----------------------------
def b_prime(tau: float) -> np.ndarray:
    """[[cos, i sin], [i sin, cos]] on an ordered mode pair."""
    c, s = np.cos(tau), np.sin(tau)
    return np.array([[c, 1j * s], [1j * s, c]])


def component_unitary(component: Component, modes: int) -> np.ndarray:
    U = np.eye(modes, dtype=complex)
    j, k = component.j, component.k
    if component.kind == "R":
        U[j, j] = np.exp(1j * component.phi)
        return U
    block = b_prime(component.tau)
    rot = np.exp(1j * component.phi)
    if component.kind == "C":
        block = block @ np.diag([rot, 1.0])
    elif component.kind == "S":
        block = np.diag([rot, 1.0]) @ block
    else:
        block = rot * block
    U[np.ix_([j, k], [j, k])] = block
    return U


def recompose(components: ComponentList, modes: int) -> np.ndarray:
    """Product of the elements in list order (the last element acts first)."""
    U = np.eye(modes, dtype=complex)
    for component in components:
        U = U @ component_unitary(component, modes)
    return U


def _modes_of(components: ComponentList) -> int:
    return 1 + max(c.j for c in components)


# ----------------------------
# Reck cancellation
# ----------------------------
def _c_inverse(tau: float, phi: float) -> np.ndarray:
    c, s = np.cos(tau), np.sin(tau)
    e = np.exp(-1j * phi)
    return np.array([[e * c, -1j * e * s], [-1j * s, c]])


def reck_decompose(U: ComplexUnitary, tol: Optional[float] = None) -> ComponentList:
    """U = D C_10 C_20 C_21 ... C_{N-1,N-2}, D expanded into R elements.

    Row N-1 is cleared first, right to left, by right-multiplying C^-1_jk.
    """
    tol = settings.TOLERANCE if tol is None else tol
    check_unitary(U, tol)
    n = U.dim
    W = np.array(U.entries, dtype=complex)
    params: Dict[Tuple[int, int], Tuple[float, float]] = {}

    for j in range(n - 1, 0, -1):
        for k in range(j - 1, -1, -1):
            u, v = W[j, j], W[j, k]
            if abs(v) < settings.CANCEL_THRESHOLD:
                tau, phi = 0.0, 0.0
            else:
                tau = float(np.arctan2(abs(v), abs(u)))
                phi = float(np.angle(u) - np.angle(v) + np.pi / 2) if abs(u) >= settings.CANCEL_THRESHOLD else 0.0
            cols = [j, k]
            W[:, cols] = W[:, cols] @ _c_inverse(tau, phi)
            if abs(W[j, k]) > tol:
                logger.error("Reck cancellation failed", j=j, k=k, residual=float(abs(W[j, k])))
                raise InternalConsistencyError(
                    f"could not cancel element ({j}, {k})", j=j, k=k, residual=float(abs(W[j, k]))
                )
            W[j, k] = 0.0
            params[(j, k)] = (tau, phi)

    off_diagonal = max_deviation(W, np.diag(np.diag(W)))
    if off_diagonal > tol:
        raise InternalConsistencyError("residual matrix is not diagonal", residual=off_diagonal)

    components: ComponentList = [phase(j, float(np.angle(W[j, j]))) for j in range(n)]
    for j in range(1, n):
        for k in range(j):
            tau, phi = params[(j, k)]
            components.append(element("C", j, k, tau, phi))
    logger.debug("Reck decomposition complete", modes=n, beamsplitters=len(params))
    return components


# ----------------------------
# Pairing switch C -> S
# ----------------------------
def c_to_s(components: ComponentList) -> ComponentList:
    """R_j(a) C_jk(tau, b) = S_jk(tau, a) R_j(b), group by group.

    Input layout: [R_0 .. R_{N-1}, C_10, C_20, C_21, ...].
    Output layout: [R_0, S_10, R_1, S_20, S_21, R_2, ...].
    """
    n = sum(1 for c in components if c.kind == "R")
    if n == 0:
        raise StructuralError("component list has no phase elements")
    phases = components[:n]
    if [(c.kind, c.j) for c in phases] != [("R", j) for j in range(n)]:
        raise StructuralError("expected leading phases R_0 .. R_{N-1}")
    rest = components[n:]
    expected = [(j, k) for j in range(1, n) for k in range(j)]
    if len(rest) != len(expected):
        raise StructuralError(
            "wrong number of beamsplitter elements", expected=len(expected), found=len(rest)
        )
    for position, (c, (j, k)) in enumerate(zip(rest, expected)):
        if c.kind != "C" or (c.j, c.k) != (j, k):
            raise StructuralError(
                f"expected C{j}{k} at position {n + position}, found {c.label()}",
                position=n + position,
            )

    out: ComponentList = [phases[0]]
    cursor = iter(rest)
    for j in range(1, n):
        carried = phases[j].phi
        for k in range(j):
            c = next(cursor)
            out.append(element("S", j, k, c.tau, carried))
            carried = c.phi
        out.append(phase(j, carried))
    return out


# ----------------------------
# Compensation sweep S -> T
# ----------------------------
def _grouped(components: ComponentList, kind: str) -> Tuple[int, List[float], Dict[Tuple[int, int], List[float]]]:
    """Parse [R_0, X_10, R_1, X_20, X_21, R_2, ...] into phases and (tau, phi) cells."""
    n = sum(1 for c in components if c.kind == "R")
    phases: List[float] = []
    cells: Dict[Tuple[int, int], List[float]] = {}
    cursor = iter(components)
    try:
        for j in range(n):
            for k in range(j):
                c = next(cursor)
                if c.kind != kind or (c.j, c.k) != (j, k):
                    raise StructuralError(
                        f"unexpected element {c.label()} where {kind}{j}{k} belongs",
                        element=c.label(),
                    )
                cells[(j, k)] = [c.tau, c.phi]
            c = next(cursor)
            if c.kind != "R" or c.j != j:
                raise StructuralError(f"unexpected element {c.label()} where R{j} belongs", element=c.label())
            phases.append(c.phi)
    except StopIteration:
        raise StructuralError("component list ends early")
    if next(cursor, None) is not None:
        raise StructuralError("trailing elements after the last group")
    return n, phases, cells


def s_to_t(components: ComponentList) -> ComponentList:
    """Rewrite every S_jk as R_k(-phi) T_jk and sweep R_k(-phi) leftwards into R_k.

    On its way the compensation phase c passes S_ik for k < i < j using
    S_ik(tau, phi) R_k(c) = R_k(c) S_ik(tau, phi + c) R_i(-c); the R_i(-c)
    merges into S_i,k+1 or, when k + 1 == i, into R_i.
    """
    n, phases, cells = _grouped(components, "S")
    converted: Dict[Tuple[int, int], Tuple[float, float]] = {}

    for j in range(n - 1, 0, -1):
        for k in range(j - 1, -1, -1):
            tau, phi = cells[(j, k)]
            converted[(j, k)] = (tau, phi)
            c = -phi
            for i in range(j - 1, k, -1):
                cells[(i, k)][1] += c
                if k + 1 < i:
                    cells[(i, k + 1)][1] -= c
                else:
                    phases[i] -= c
            phases[k] += c

    out: ComponentList = []
    for j in range(n):
        for k in range(j):
            tau, phi = converted[(j, k)]
            out.append(element("T", j, k, tau, phi))
        out.append(phase(j, phases[j]))
    return out


def triangular_components(U: ComplexUnitary, tol: Optional[float] = None) -> ComponentList:
    """Full Reck chain down to T and R elements, each pass oracle-checked."""
    tol = settings.TOLERANCE if tol is None else tol
    target = U.entries
    stages = []
    components = reck_decompose(U, tol)
    stages.append(("reck", components))
    components = c_to_s(components)
    stages.append(("c_to_s", components))
    components = s_to_t(components)
    stages.append(("s_to_t", components))
    for name, stage in stages:
        residual = max_deviation(recompose(stage, U.dim), target)
        if residual > tol:
            logger.error("Pass broke recomposition", stage=name, residual=residual)
            raise InternalConsistencyError(f"{name} changed the network", stage=name, residual=residual)
    return components


# ----------------------------
# Rectangular (Clements) factorisation
# ----------------------------
@dataclass
class MeshFactor:
    """2x2 unitary on modes (d-1, d) placed at time step ``layer``."""

    d: int
    block: np.ndarray
    layer: int = 0


def _null_right(u: complex, v: complex) -> np.ndarray:
    n = np.hypot(abs(u), abs(v))
    if n < settings.CANCEL_THRESHOLD:
        return np.eye(2, dtype=complex)
    return np.array([[v, np.conj(u)], [-u, np.conj(v)]]) / n


def _null_left(a: complex, b: complex) -> np.ndarray:
    n = np.hypot(abs(a), abs(b))
    if n < settings.CANCEL_THRESHOLD:
        return np.eye(2, dtype=complex)
    return np.array([[np.conj(a), np.conj(b)], [b, -a]]) / n


def clements_decompose(U: ComplexUnitary, tol: Optional[float] = None) -> Tuple[List[MeshFactor], np.ndarray]:
    """U = D * F_1 * F_2 * ... with nearest-neighbour factors F.

    Returns the factors in application order (first applied first), each with
    its time step in the rectangular mesh, and the diagonal phases of D.
    """
    tol = settings.TOLERANCE if tol is None else tol
    check_unitary(U, tol)
    n = U.dim
    W = np.array(U.entries, dtype=complex)
    right: List[MeshFactor] = []
    left: List[MeshFactor] = []

    for i in range(n - 1):
        for j in range(i + 1):
            if i % 2 == 0:
                m = i - j
                Y = _null_right(W[n - 1 - j, m], W[n - 1 - j, m + 1])
                W[:, [m, m + 1]] = W[:, [m, m + 1]] @ Y
                right.append(MeshFactor(d=m + 1, block=Y.conj().T))
            else:
                r = n - 2 - i + j
                Z = _null_left(W[r, j], W[r + 1, j])
                W[[r, r + 1], :] = Z @ W[[r, r + 1], :]
                left.append(MeshFactor(d=r + 1, block=Z.conj().T))

    off_diagonal = max_deviation(W, np.diag(np.diag(W)))
    if off_diagonal > tol:
        raise InternalConsistencyError("rectangular elimination left off-diagonal terms", residual=off_diagonal)
    diag = np.diag(W).copy()

    # U = Z_1^+ ... Z_p^+ D Y_m^+ ... Y_1^+; move D to the far left.
    for factor in left:
        pair = diag[[factor.d - 1, factor.d]]
        factor.block = np.diag(pair.conj()) @ factor.block @ np.diag(pair)
    ordered = right + left[::-1]

    # earliest time step per factor, respecting parity d = layer mod 2
    last = [0] * n
    for factor in ordered:
        layer = max(last[factor.d - 1], last[factor.d]) + 1
        if layer % 2 != factor.d % 2:
            layer += 1
        if layer > n:
            raise InternalConsistencyError("rectangular mesh deeper than the mode count", layer=layer)
        factor.layer = layer
        last[factor.d - 1] = last[factor.d] = layer
    return ordered, np.angle(diag)


def split_factor(block: np.ndarray, eps: float = 1e-12) -> Tuple[float, Tuple[float, float], Tuple[float, float]]:
    """block = diag(e^{i alpha}) B'(tau) diag(e^{i beta}) with beta[1] = 0."""
    tau = float(np.arctan2(abs(block[0, 1]), abs(block[0, 0])))
    c, s = np.cos(tau), np.sin(tau)
    if s < eps:
        alpha = (float(np.angle(block[0, 0])), float(np.angle(block[1, 1])))
        beta = (0.0, 0.0)
    elif c < eps:
        alpha = (float(np.angle(block[0, 1]) - np.pi / 2), 0.0)
        beta = (float(np.angle(block[1, 0]) - np.pi / 2), 0.0)
    else:
        alpha_1 = float(np.angle(block[1, 1]))
        beta_0 = float(np.angle(block[1, 0]) - np.pi / 2 - alpha_1)
        alpha = (float(np.angle(block[0, 0]) - beta_0), alpha_1)
        beta = (beta_0, 0.0)
    rebuilt = np.diag(np.exp(1j * np.array(alpha))) @ b_prime(tau) @ np.diag(np.exp(1j * np.array(beta)))
    residual = max_deviation(rebuilt, block)
    if residual > 1e-9:
        raise InternalConsistencyError("could not split a mesh factor", residual=residual)
    return tau, alpha, beta


# ----------------------------
# Bloch-Messiah
# ----------------------------
def _takagi_symmetric_unitary(W: np.ndarray) -> np.ndarray:
    """Q with Q Q^T = W for a symmetric unitary W."""
    X = (W.real + W.real.T) / 2
    Y = (W.imag + W.imag.T) / 2
    for mu in (np.sqrt(2), np.pi / 3, np.e):
        _, O = np.linalg.eigh(X + mu * Y)
        D = O.T @ W @ O
        if max_deviation(D, np.diag(np.diag(D))) < 1e-9:
            break
    else:
        raise InternalConsistencyError("joint diagonalisation of a degenerate block failed")
    for col in range(O.shape[1]):
        lead = O[np.argmax(np.abs(O[:, col]) > 1e-12), col]
        if lead < 0:
            O[:, col] = -O[:, col]
    w = np.diag(O.T @ W @ O)
    return O * np.exp(1j * np.angle(w) / 2)


def _degenerate_blocks(values: np.ndarray) -> List[List[int]]:
    blocks: List[List[int]] = []
    for i, value in enumerate(values):
        if blocks and abs(values[blocks[-1][0]] - value) <= 1e-8 * max(1.0, value):
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def bloch_messiah(
    pair: BogoliubovPair, tol: Optional[float] = None
) -> Tuple[ComplexUnitary, SqueezeParams, ComplexUnitary]:
    """A = U cosh(r) V^dagger, B = U sinh(r) V^T, r >= 0 in descending order."""
    tol = settings.TOLERANCE if tol is None else tol
    check_bogoliubov(pair, tol)
    A, B = pair.matA, pair.matB
    U, d, Vh = np.linalg.svd(A)
    V = Vh.conj().T
    M = U.conj().T @ B @ V.conj()

    for block in _degenerate_blocks(d):
        Mb = M[np.ix_(block, block)]
        s = float(np.mean(np.linalg.svd(Mb, compute_uv=False)))
        if s < settings.CANCEL_THRESHOLD:
            continue
        Q = _takagi_symmetric_unitary((Mb + Mb.T) / (2 * s))
        U[:, block] = U[:, block] @ Q
        V[:, block] = V[:, block] @ Q

    r = np.arcsinh(np.real(np.diag(U.conj().T @ B @ V.conj())))
    residual = max(
        max_deviation(U @ np.diag(np.cosh(r)) @ V.conj().T, A),
        max_deviation(U @ np.diag(np.sinh(r)) @ V.T, B),
    )
    if residual > tol:
        logger.error("Bloch-Messiah reconstruction failed", residual=residual)
        raise InternalConsistencyError("Bloch-Messiah reconstruction failed", residual=residual)
    logger.debug("Bloch-Messiah reduction", modes=pair.modes, squeezing=[float(x) for x in r])
    return (
        ComplexUnitary(dim=pair.modes, entries=U),
        SqueezeParams(values=[float(x) for x in r]),
        ComplexUnitary(dim=pair.modes, entries=V),
    )
