"""Macronode-level verification of schedules.

The verifier composes the ideal (infinite squeezing) two-mode maps of every
instruction along the wiring and returns the resulting N-mode symplectic map.
"""

from typing import Dict, Optional, Tuple, Union

import networkx as nx
import numpy as np

from app.core.config import settings
from app.core.exceptions import StructuralError, ToleranceExceededError, ValidationError
from app.models.matrix_model import BogoliubovPair, ComplexUnitary, ShearMatrix, SymplecticMap
from app.models.run_model import VerifyReport
from app.models.schedule_model import Schedule
from app.services.symplectic_service import (
    bogoliubov_to_symplectic,
    max_deviation,
    shear_symplectic,
    unitary_to_symplectic,
)
from app.services.placement_service import route
from app.services.teleport_service import macronode_map
from app.utils.logger import logger

Target = Union[ComplexUnitary, BogoliubovPair, ShearMatrix, SymplecticMap]

# rows of a TwoModeMap producing each output direction: (x row, p row)
_OUTPUT_ROWS = {"horizontal": (0, 2), "vertical": (1, 3)}
# columns of a TwoModeMap fed by each input arm: (x col, p col)
_INPUT_COLS = {"b": (0, 2), "d": (1, 3)}

_MESH_ROLES = ("beamsplitter", "shear-pair")


# ----------------------------
# Wiring checks
# ----------------------------
def schedule_graph(schedule: Schedule) -> nx.DiGraph:
    """Check the wiring rules and return the instruction DAG keyed by site.

    Raises:
        StructuralError: duplicate sites, wires produced twice or consumed
            twice, wires arriving from an illegal neighbour, unknown output
            wires, outputs that disagree with the swap flag, or a cycle.
    """
    n, period = schedule.modes, schedule.lattice_period
    if len(schedule.input_wires) != n or len(schedule.output_wires) != n:
        raise StructuralError(
            "input and output wire lists must have one entry per mode",
            modes=n,
            inputs=len(schedule.input_wires),
            outputs=len(schedule.output_wires),
        )

    graph = nx.DiGraph()
    producer: Dict[int, Tuple[Optional[int], Optional[str]]] = {}
    for wire in schedule.input_wires:
        if wire in producer:
            raise StructuralError(f"input wire {wire} declared twice", wire=wire)
        producer[wire] = (None, None)

    for instruction in schedule.instructions:
        if instruction.site in graph:
            raise StructuralError(f"two instructions at site {instruction.site}", site=instruction.site)
        graph.add_node(instruction.site, role=instruction.role)
        directions = [link.direction for link in instruction.wires_out]
        if len(set(directions)) != len(directions):
            raise StructuralError("both outputs leave in the same direction", site=instruction.site)
        arms = [port.arm for port in instruction.wires_in]
        if len(set(arms)) != len(arms):
            raise StructuralError("both inputs arrive on the same arm", site=instruction.site)
        if sorted(directions) != sorted(route(arm, instruction.swap) for arm in arms):
            raise StructuralError(
                "outputs do not follow the swap flag",
                site=instruction.site,
                swap=instruction.swap,
                arms=arms,
                directions=directions,
            )
        for link in instruction.wires_out:
            if link.wire in producer:
                raise StructuralError(
                    f"wire {link.wire} produced more than once", site=instruction.site, wire=link.wire
                )
            producer[link.wire] = (instruction.site, link.direction)

    consumed = set()
    for instruction in schedule.instructions:
        site = instruction.site
        for port in instruction.wires_in:
            if port.wire not in producer:
                raise StructuralError(f"wire {port.wire} is never produced", site=site, wire=port.wire)
            if port.wire in consumed:
                raise StructuralError(f"wire {port.wire} consumed more than once", site=site, wire=port.wire)
            consumed.add(port.wire)
            source, direction = producer[port.wire]
            if source is None:
                continue
            expected = (site - 1, "horizontal") if port.arm == "b" else (site - period, "vertical")
            if (source, direction) != expected:
                raise StructuralError(
                    f"wire {port.wire} on arm {port.arm} does not come from a legal neighbour",
                    site=site,
                    wire=port.wire,
                    source=source,
                )
            graph.add_edge(source, site)

    for wire in schedule.output_wires:
        if wire not in producer:
            raise StructuralError(f"output wire {wire} is never produced", wire=wire)
        if wire in consumed:
            raise StructuralError(f"output wire {wire} is consumed by an instruction", wire=wire)

    if not nx.is_directed_acyclic_graph(graph):
        raise StructuralError("schedule wiring contains a cycle")
    return graph


# ----------------------------
# Composition
# ----------------------------
def verify_schedule(
    schedule: Schedule, tol: Optional[float] = None, threshold: Optional[float] = None
) -> SymplecticMap:
    """Compose the instruction maps along the wiring.

    Each wire carries its (x, p) rows over the 2N input quadratures. An input
    slot without a wire feeds zeros; a node whose angles couple such a slot
    into an output is logged and its map still composed, so the loss shows
    up as a deviation from the target.
    """
    tol = settings.TOLERANCE if tol is None else tol
    n = schedule.modes
    graph = schedule_graph(schedule)
    by_site = {instruction.site: instruction for instruction in schedule.instructions}

    rows: Dict[int, np.ndarray] = {}
    for mode, wire in enumerate(schedule.input_wires):
        rows[wire] = np.zeros((2, 2 * n))
        rows[wire][0, mode] = 1.0
        rows[wire][1, mode + n] = 1.0

    for site in nx.lexicographical_topological_sort(graph):
        instruction = by_site[site]
        G = macronode_map(instruction.angles, threshold).entries
        local = np.zeros((4, 2 * n))
        fed = set()
        for port in instruction.wires_in:
            xc, pc = _INPUT_COLS[port.arm]
            local[xc], local[pc] = rows.pop(port.wire)
            fed.update((xc, pc))
        missing = [col for col in range(4) if col not in fed]
        for link in instruction.wires_out:
            out = list(_OUTPUT_ROWS[link.direction])
            if missing:
                leak = float(np.max(np.abs(G[np.ix_(out, missing)])))
                if leak > tol:
                    logger.warning(
                        "Output depends on an unwired input",
                        site=site,
                        wire=link.wire,
                        direction=link.direction,
                        coupling=leak,
                    )
            rows[link.wire] = G[out] @ local

    S = np.zeros((2 * n, 2 * n))
    for mode, wire in enumerate(schedule.output_wires):
        S[mode], S[mode + n] = rows[wire]
    logger.debug("Verified schedule", modes=n, instructions=len(schedule.instructions))
    return SymplecticMap(modes=n, entries=S)


def target_symplectic(target: Target, tol: Optional[float] = None) -> SymplecticMap:
    """Real map of any supported target."""
    if isinstance(target, SymplecticMap):
        return target
    if isinstance(target, ComplexUnitary):
        return unitary_to_symplectic(target, tol)
    if isinstance(target, BogoliubovPair):
        return bogoliubov_to_symplectic(target, tol)
    if isinstance(target, ShearMatrix):
        return shear_symplectic(target)
    raise ValidationError(f"unsupported target type {type(target).__name__}")


def verify_against(schedule: Schedule, target: Target, tol: Optional[float] = None) -> VerifyReport:
    """Max-entry deviation between the composed map and the target."""
    tol = settings.TOLERANCE if tol is None else tol
    expected = target_symplectic(target, tol)
    if expected.modes != schedule.modes:
        raise StructuralError(
            "schedule and target have different mode counts",
            schedule_modes=schedule.modes,
            target_modes=expected.modes,
        )
    deviation = max_deviation(verify_schedule(schedule).entries, expected.entries)
    report = VerifyReport(
        modes=schedule.modes,
        max_deviation=deviation,
        tolerance=tol,
        within_tolerance=deviation <= tol,
    )
    logger.info("Verification finished", modes=schedule.modes, max_deviation=deviation, tolerance=tol)
    return report


def require_within(report: VerifyReport) -> VerifyReport:
    if not report.within_tolerance:
        raise ToleranceExceededError(report.max_deviation, report.tolerance)
    return report


# ----------------------------
# Path statistics
# ----------------------------
def path_length_spread(schedule: Schedule) -> Tuple[int, int]:
    """(min, max) number of beamsplitter-class nodes on any input-to-output path."""
    graph = schedule_graph(schedule)
    by_site = {instruction.site: instruction for instruction in schedule.instructions}
    weighted = nx.DiGraph()
    source, sink = "source", "sink"
    weighted.add_nodes_from([source, sink])

    def weight(site: int) -> int:
        return 1 if by_site[site].role in _MESH_ROLES else 0

    for u, v in graph.edges:
        weighted.add_edge(u, v, weight=weight(v))
    inputs = set(schedule.input_wires)
    outputs = set(schedule.output_wires)
    for instruction in schedule.instructions:
        if any(port.wire in inputs for port in instruction.wires_in):
            weighted.add_edge(source, instruction.site, weight=weight(instruction.site))
        if any(link.wire in outputs for link in instruction.wires_out):
            weighted.add_edge(instruction.site, sink, weight=0)
    if inputs & outputs:
        weighted.add_edge(source, sink, weight=0)
    if not nx.has_path(weighted, source, sink):
        return 0, 0

    # restrict the longest-path search to nodes on some input-output path
    relevant = (nx.descendants(weighted, source) | {source}) & (nx.ancestors(weighted, sink) | {sink})
    sub = weighted.subgraph(relevant)
    longest = nx.dag_longest_path_length(sub, weight="weight")
    shortest = nx.shortest_path_length(sub, source, sink, weight="weight")
    return int(shortest), int(longest)
