"""Compile target matrices into wired macronode schedules."""

from typing import Dict, List, Optional

import numpy as np

from app.core.config import settings
from app.models.angles_model import MacronodeAngles
from app.models.component_model import ComponentList
from app.models.matrix_model import BogoliubovPair, ComplexUnitary, ShearMatrix
from app.models.run_model import CompileSummary
from app.models.schedule_model import Schedule
from app.services import teleport_service as tp
from app.services.decomposition_service import (
    bloch_messiah,
    clements_decompose,
    split_factor,
    triangular_components,
)
from app.services.placement_service import (
    Injection,
    PlacedNode,
    rectangle_cell,
    rectangle_groups,
    rectangle_injections,
    triangle_cell,
    triangle_injections,
    wire_up,
)
from app.services.symplectic_service import check_bogoliubov, check_shear, check_unitary
from app.utils.logger import logger


def _swapped(angles: MacronodeAngles) -> MacronodeAngles:
    return tp.angles_for_swap(angles.arm_b, angles.arm_d)


def _log_compiled(kind: str, schedule: Schedule) -> None:
    summary = schedule_footprint(schedule)
    logger.info(
        "Compiled schedule",
        kind=kind,
        modes=summary.modes,
        lattice_period=summary.lattice_period,
        instructions=summary.instructions,
        roles=summary.roles,
    )


# ----------------------------
# Triangular networks
# ----------------------------
def _triangle_nodes(
    components: ComponentList, modes: int, row0: int = 0, col0: int = 0, transposed: bool = False
) -> List[PlacedNode]:
    """T elements become beamsplitter nodes, R elements swapped phase nodes on the diagonal."""
    nodes = []
    for component in components:
        if component.kind == "R":
            row, col = triangle_cell(component.j, component.j, modes, transposed)
            nodes.append(
                PlacedNode(row0 + row, col0 + col, "phase", _swapped(tp.angles_for_phase(component.phi)), True)
            )
        else:
            row, col = triangle_cell(component.j, component.k, modes, transposed)
            nodes.append(
                PlacedNode(row0 + row, col0 + col, "beamsplitter", tp.angles_for_beamsplitter(component.tau, component.phi))
            )
    return nodes


def compile_bs_triangular(U: ComplexUnitary, tol: Optional[float] = None) -> Schedule:
    """Reck chain placed as a triangle: N(N-1)/2 beamsplitter and N phase nodes."""
    components = triangular_components(U, tol)
    schedule = wire_up(U.dim, _triangle_nodes(components, U.dim), triangle_injections(U.dim))
    _log_compiled("triangular", schedule)
    return schedule


# ----------------------------
# Rectangular networks
# ----------------------------
def compile_bs_rectangular(U: ComplexUnitary, tol: Optional[float] = None) -> Schedule:
    """Nearest-neighbour mesh in N time steps, framed by phase nodes.

    Time step s = 0 holds the input phase nodes (common phase on two inputs),
    s = N + 1 the output phase nodes, and the single-mode nodes at the mesh
    edges carry the remaining phases. Between steps, leftover phases are split
    along the chain of nodes of two neighbouring steps.
    """
    n = U.dim
    factors, final_phases = clements_decompose(U, tol)

    # phases[s][m]: phase on mode m between time step s and s + 1
    phases = np.zeros((n + 1, n))
    taus = {}
    for factor in factors:
        tau, alpha, beta = split_factor(factor.block)
        taus[(factor.layer, factor.d)] = tau
        phases[factor.layer, [factor.d - 1, factor.d]] += alpha
        phases[factor.layer - 1, [factor.d - 1, factor.d]] += beta
    phases[n] += final_phases

    node_phase = {}
    carry = np.zeros(n)
    for s in range(n + 1):
        v = phases[s] + carry
        chain = np.zeros(n + 1)
        for m in range(n):
            chain[m + 1] = v[m] - chain[m]
        for d in range(n + 1):
            if d % 2 == s % 2:
                node_phase[(s, d)] = chain[d]
            else:
                node_phase[(s + 1, d)] = chain[d]
        carry = np.array([chain[m] if m % 2 == (s + 1) % 2 else chain[m + 1] for m in range(n)])

    nodes = []
    for s in range(n + 2):
        for d in rectangle_groups(s, n):
            row, col = rectangle_cell(s, d, n)
            phi = float(node_phase.get((s, d), 0.0))
            if 1 <= s <= n and 1 <= d <= n - 1:
                angles = tp.angles_for_beamsplitter(taus.get((s, d), 0.0), phi)
                nodes.append(PlacedNode(row, col, "beamsplitter", _swapped(angles), True))
            else:
                nodes.append(PlacedNode(row, col, "phase", _swapped(tp.angles_for_phase(phi)), True))

    schedule = wire_up(n, nodes, rectangle_injections(n))
    _log_compiled("rectangular", schedule)
    return schedule


# ----------------------------
# General Gaussian unitaries
# ----------------------------
def compile_gaussian(pair: BogoliubovPair, tol: Optional[float] = None) -> Schedule:
    """Triangle(V^dagger), a column of squeezers, transposed triangle(U).

    Each squeezer node realises R(-pi/4) S(r) R(pi/4); the two rotations are
    folded into the neighbouring networks as e^{-i pi/4} V^dagger and
    U e^{i pi/4}.
    """
    tol = settings.TOLERANCE if tol is None else tol
    check_bogoliubov(pair, tol)
    n = pair.modes
    U, squeezing, V = bloch_messiah(pair, tol)

    first = ComplexUnitary(dim=n, entries=np.exp(-1j * np.pi / 4) * V.entries.conj().T)
    last = ComplexUnitary(dim=n, entries=np.exp(1j * np.pi / 4) * U.entries)

    nodes = _triangle_nodes(triangular_components(first, tol), n)
    for j, r in enumerate(squeezing.values):
        if abs(r) < settings.CANCEL_THRESHOLD:
            nodes.append(PlacedNode(n - 1 - j, n, "identity", tp.angles_for_identity()))
        else:
            nodes.append(PlacedNode(n - 1 - j, n, "squeeze", tp.angles_for_squeeze(r)))
    nodes += _triangle_nodes(triangular_components(last, tol), n, col0=n + 1, transposed=True)

    schedule = wire_up(n, nodes, triangle_injections(n))
    _log_compiled("gaussian", schedule)
    return schedule


# ----------------------------
# Multimode shear
# ----------------------------
def compile_shear(K: ShearMatrix, tol: Optional[float] = None) -> Schedule:
    """Shear pairs at the triangle's two-mode cells, diagonal shears on the diagonal."""
    check_shear(K, tol)
    n = K.modes
    entries = (K.entries + K.entries.T) / 2
    idle = settings.CANCEL_THRESHOLD
    nodes = []
    for j in range(n):
        row, col = triangle_cell(j, j, n)
        kappa = float(entries[j, j])
        pair = tp.angles_for_single_shear(kappa, x_invariant=True)
        role = "identity" if abs(kappa) < idle else "shear"
        nodes.append(PlacedNode(row, col, role, tp.angles_for_swap(pair, pair), True))
        for k in range(j):
            row, col = triangle_cell(j, k, n)
            lam = float(entries[j, k])
            role = "identity" if abs(lam) < idle else "shear-pair"
            nodes.append(PlacedNode(row, col, role, tp.angles_for_shear_pair(0.0, lam)))
    schedule = wire_up(n, nodes, triangle_injections(n))
    _log_compiled("shear", schedule)
    return schedule


def compile_target(target, layout: str = "triangular", tol: Optional[float] = None) -> Schedule:
    """Dispatch on the target type."""
    if isinstance(target, BogoliubovPair):
        return compile_gaussian(target, tol)
    if isinstance(target, ShearMatrix):
        return compile_shear(target, tol)
    check_unitary(target, tol)
    if layout == "rectangular":
        return compile_bs_rectangular(target, tol)
    return compile_bs_triangular(target, tol)


def input_injections(schedule: Schedule) -> List[Injection]:
    """Recover (mode, site, arm) of every program input from the wiring."""
    period = schedule.lattice_period
    consumer = {}
    for instruction in schedule.instructions:
        for port in instruction.wires_in:
            consumer[port.wire] = (instruction.site, port.arm)
    injections = []
    for mode, wire in enumerate(schedule.input_wires):
        if wire in consumer:
            site, arm = consumer[wire]
            row, col = divmod(site, period)
            injections.append(Injection(mode=mode, row=row, col=col, arm=arm))
    return injections


def schedule_footprint(schedule: Schedule) -> CompileSummary:
    """Role counts and the bounding box of the occupied grid cells."""
    roles: Dict[str, int] = {}
    for instruction in schedule.instructions:
        roles[instruction.role] = roles.get(instruction.role, 0) + 1
    cells = [schedule.position(instruction.site) for instruction in schedule.instructions]
    rows = max(row for row, _ in cells) - min(row for row, _ in cells) + 1 if cells else 0
    columns = max(col for _, col in cells) - min(col for _, col in cells) + 1 if cells else 0
    return CompileSummary(
        modes=schedule.modes,
        lattice_period=schedule.lattice_period,
        instructions=len(schedule.instructions),
        roles=roles,
        rows=rows,
        columns=columns,
    )
