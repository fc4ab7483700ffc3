"""Placement of macronode operations on the lattice grid and wire generation.

Placed nodes only carry (row, column, role, angles, swap). Wires are derived
by following every logical mode from its injection point: an unswapped node
sends the B input right (t + 1) and the D input down (t + N_lat); a swapped
node exchanges the two directions. A mode leaving towards an unscheduled site
becomes an output wire.
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

from app.core.config import settings
from app.core.exceptions import StructuralError
from app.models.angles_model import MacronodeAngles
from app.models.schedule_model import (
    Arm,
    Direction,
    MacronodeInstruction,
    Role,
    Schedule,
    WireLink,
    WirePort,
)


@dataclass(frozen=True)
class PlacedNode:
    row: int
    col: int
    role: Role
    angles: MacronodeAngles
    swap: bool = False


@dataclass(frozen=True)
class Injection:
    """Logical input ``mode`` entering the node at (row, col) on ``arm``."""

    mode: int
    row: int
    col: int
    arm: Arm


def route(arm: Arm, swap: bool) -> Direction:
    if (arm == "b") != swap:
        return "horizontal"
    return "vertical"


def lattice_period_for(nodes: List[PlacedNode]) -> int:
    width = max((node.col for node in nodes), default=-1) + 1
    return width + settings.LATTICE_MARGIN


def wire_up(modes: int, nodes: List[PlacedNode], injections: List[Injection]) -> Schedule:
    """Turn placed nodes and input injections into a wired Schedule."""
    period = lattice_period_for(nodes)
    by_site: Dict[int, PlacedNode] = {}
    for node in nodes:
        site = node.row * period + node.col
        if site in by_site:
            raise StructuralError(f"two nodes placed at site {site}", site=site)
        by_site[site] = node

    # mode flow: which mode enters each (site, arm), and where each mode ends
    entering: Dict[Tuple[int, Arm], int] = {}
    exits: Dict[int, Tuple[int, Direction]] = {}
    for injection in injections:
        site = injection.row * period + injection.col
        arm: Arm = injection.arm
        if site not in by_site:
            raise StructuralError(f"input {injection.mode} injected at empty site {site}", site=site)
        while site in by_site:
            if (site, arm) in entering:
                raise StructuralError(f"two modes enter site {site} on arm {arm}", site=site, arm=arm)
            entering[(site, arm)] = injection.mode
            direction = route(arm, by_site[site].swap)
            exits[injection.mode] = (site, direction)
            site, arm = (site + 1, "b") if direction == "horizontal" else (site + period, "d")

    if sorted(exits) != list(range(modes)):
        raise StructuralError("every mode needs exactly one injection", injected=sorted(exits))

    # wire ids: inputs are 0..N-1, outputs numbered in site order
    incoming: Dict[Tuple[int, Arm], int] = {
        (inj.row * period + inj.col, inj.arm): inj.mode for inj in injections
    }
    final_wire: Dict[int, int] = {}
    next_wire = modes
    instructions: List[MacronodeInstruction] = []
    for site in sorted(by_site):
        node = by_site[site]
        wires_in: List[WirePort] = []
        wires_out: List[WireLink] = []
        for arm in ("b", "d"):
            if (site, arm) not in entering:
                continue
            mode = entering[(site, arm)]
            wires_in.append(WirePort(wire=incoming[(site, arm)], arm=arm))
            direction = route(arm, node.swap)
            wires_out.append(WireLink(wire=next_wire, direction=direction))
            landing = (site + 1, "b") if direction == "horizontal" else (site + period, "d")
            incoming[landing] = next_wire
            if exits[mode] == (site, direction):
                final_wire[mode] = next_wire
            next_wire += 1
        wires_out.sort(key=lambda link: link.direction)
        instructions.append(
            MacronodeInstruction(
                site=site,
                role=node.role,
                angles=node.angles,
                swap=node.swap,
                wires_in=wires_in,
                wires_out=wires_out,
            )
        )

    return Schedule(
        modes=modes,
        lattice_period=period,
        instructions=instructions,
        input_wires=list(range(modes)),
        output_wires=[final_wire[mode] for mode in range(modes)],
    )


# ----------------------------
# Grid geometry
# ----------------------------
def triangle_cell(j: int, k: int, modes: int, transposed: bool = False) -> Tuple[int, int]:
    """Grid cell of the two-mode node (j, k), j > k, or of the diagonal node j = k.

    Upright triangle: mode j runs along row N-1-j after turning at the diagonal,
    inputs enter from the top. Transposed triangle: inputs enter from the left
    and leave through the bottom.
    """
    if transposed:
        return modes - 1 - k, modes - 1 - j
    return modes - 1 - j, modes - 1 - k


def triangle_injections(modes: int, transposed: bool = False) -> List[Injection]:
    if transposed:
        return [Injection(mode=j, row=modes - 1 - j, col=0, arm="b") for j in range(modes)]
    return [Injection(mode=j, row=0, col=modes - 1 - j, arm="d") for j in range(modes)]


def rectangle_cell(s: int, d: int, modes: int) -> Tuple[int, int]:
    """Grid cell of the rectangular-mesh node at time step s on diagonal d."""
    return (s - d) // 2 + modes // 2, (s + d) // 2


def rectangle_groups(s: int, modes: int) -> List[int]:
    """Diagonals d (d = s mod 2) of time step s; node d hosts modes {d-1, d}."""
    return [d for d in range(s % 2, modes + 1, 2)]


def rectangle_injections(modes: int) -> List[Injection]:
    injections = []
    for d in rectangle_groups(0, modes):
        row, col = rectangle_cell(0, d, modes)
        if d - 1 >= 0:
            injections.append(Injection(mode=d - 1, row=row, col=col, arm="b"))
        if d < modes:
            injections.append(Injection(mode=d, row=row, col=col, arm="d"))
    return injections
