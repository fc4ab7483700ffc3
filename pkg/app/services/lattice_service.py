"""Gaussian simulation of the quad-rail lattice at finite squeezing.

Every time index t holds four micronodes (a, b, c, d). The optical network
produces two-mode squeezed pairs (A_t, B_{t+1}) and (C_t, D_{t+N}) in the
distributed basis, with the delay lines reduced to index relabeling; a
foursplitter per time index turns the distributed modes into the micronodes.
States are stored in the micronode basis with xxpp ordering.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.linalg import cho_factor, cho_solve

from app.core.config import settings
from app.core.exceptions import (
    ConfigurationError,
    LatticeRangeError,
    StateError,
    StructuralError,
)
from app.models.angles_model import MacronodeAngles
from app.models.lattice_model import RAILS, GaussianState, HomodyneRecord, PulseId
from app.models.run_model import RunReport
from app.models.schedule_model import Arm, Schedule
from app.services.symplectic_service import (
    bs_symplectic,
    foursplitter_matrix,
    squeeze_symplectic,
    symplectic_form,
)
from app.services.teleport_service import feedforward_matrix
from app.services.verify_service import schedule_graph, verify_schedule
from app.utils.logger import logger

# distributed mode index of each rail letter: a -> A, b -> B, c -> C, d -> D
_RAIL_INDEX = {rail: i for i, rail in enumerate(RAILS)}


def db_to_r(r_db: float) -> float:
    """Squeezing in dB to the squeeze parameter r."""
    return float(r_db) * np.log(10.0) / 20.0


# ----------------------------
# Lattice construction
# ----------------------------
def _tms_cov(r: float) -> np.ndarray:
    """Covariance of (A, B') over (x_A, x_B', p_A, p_B')."""
    S = bs_symplectic(np.pi / 4, 0, 1, 2).entries
    S = S @ squeeze_symplectic(r, 0, 2).entries @ squeeze_symplectic(-r, 1, 2).entries
    return 0.5 * S @ S.T


def _window_table(t_min: int, t_max: int) -> List[PulseId]:
    return [PulseId(rail=rail, t=t) for t in range(t_min, t_max + 1) for rail in RAILS]


def _macronode_basis_change(state: GaussianState, matrix: np.ndarray, sites: Sequence[int]) -> GaussianState:
    """Apply the same 4x4 real mode mixing to the micronodes of each site."""
    m = state.modes
    T = np.eye(2 * m)
    for t in sites:
        slots = [state.slot(PulseId(rail=rail, t=t)) for rail in RAILS]
        T[np.ix_(slots, slots)] = matrix
        shifted = [slot + m for slot in slots]
        T[np.ix_(shifted, shifted)] = matrix
    out = state.copy_state()
    out.mean = T @ state.mean
    out.cov = T @ state.cov @ T.T
    return out


def _complete_sites(state: GaussianState) -> List[int]:
    present: Dict[int, int] = {}
    for pulse in state.mode_table:
        present[pulse.t] = present.get(pulse.t, 0) + 1
    return sorted(t for t, count in present.items() if count == len(RAILS))


def build_qrl(t_min: int, t_max: int, lattice_period: int, r: float) -> GaussianState:
    """Finite-squeezing lattice state over macronodes t_min..t_max.

    Raises:
        ConfigurationError: window shorter than the lattice period, a
            non-positive period, or negative r.
    """
    if lattice_period < 1:
        raise ConfigurationError("lattice period must be >= 1", lattice_period=lattice_period)
    if t_max - t_min < lattice_period:
        raise ConfigurationError(
            "window too small for the t + N delay",
            t_min=t_min,
            t_max=t_max,
            lattice_period=lattice_period,
        )
    if r < 0 or not np.isfinite(r):
        raise ConfigurationError("squeezing r must be finite and >= 0", r=r)

    table = _window_table(t_min, t_max)
    m = len(table)
    index = {pulse: i for i, pulse in enumerate(table)}
    cov = np.zeros((2 * m, 2 * m))
    pair = _tms_cov(r)
    thermal = np.cosh(2 * r) / 2

    def place(first: Optional[int], second: Optional[int]) -> None:
        if first is not None and second is not None:
            idx = [first, second, first + m, second + m]
            cov[np.ix_(idx, idx)] = pair
            return
        for slot in (first, second):
            if slot is not None:
                cov[slot, slot] = cov[slot + m, slot + m] = thermal

    # pairs are keyed by the earlier partner, which may sit before the window
    for t in range(t_min - lattice_period, t_max + 1):
        for early, late, delay in (("a", "b", 1), ("c", "d", lattice_period)):
            first = index.get(PulseId(rail=early, t=t))
            second = index.get(PulseId(rail=late, t=t + delay))
            if first is not None or second is not None:
                place(first, second)

    distributed = GaussianState(
        mean=np.zeros(2 * m),
        cov=cov,
        mode_table=table,
        lattice_period=lattice_period,
        t_min=t_min,
        t_max=t_max,
    )
    state = _macronode_basis_change(distributed, foursplitter_matrix(), range(t_min, t_max + 1))
    logger.debug("Built lattice", t_min=t_min, t_max=t_max, lattice_period=lattice_period, r=r, modes=m)
    return state


def distributed_state(state: GaussianState) -> GaussianState:
    """Micronodes to distributed modes for every fully present macronode.

    In the returned state the rail letters a, b, c, d of a complete macronode
    name the distributed modes A, B, C, D.
    """
    return _macronode_basis_change(state, foursplitter_matrix().T, _complete_sites(state))


def physicality_margin(state: GaussianState) -> float:
    """Smallest eigenvalue of cov + i Omega / 2; negative means unphysical."""
    omega = symplectic_form(state.modes)
    return float(np.min(np.linalg.eigvalsh(state.cov + 0.5j * omega)))


# ----------------------------
# Nullifiers
# ----------------------------
_NULLIFIER_COEFFS = (
    # (quadrature, coefficients at t, partner offset, coefficients at partner)
    ("p", (1, -1, 1, -1), "right", (1, 1, 1, 1)),
    ("x", (-1, 1, -1, 1), "right", (1, 1, 1, 1)),
    ("p", (-1, 1, 1, -1), "down", (-1, -1, 1, 1)),
    ("x", (1, -1, -1, 1), "down", (-1, -1, 1, 1)),
)


def _require_macronode(state: GaussianState, t: int) -> List[int]:
    if state.t_min is None or not (state.t_min <= t <= state.t_max):
        raise LatticeRangeError(f"macronode {t} outside the simulated window", t=t)
    if t in state.measured:
        raise StateError(f"macronode {t} has already been measured", t=t)
    return [state.slot(PulseId(rail=rail, t=t)) for rail in RAILS]


def nullifier_variances(state: GaussianState, t: int) -> List[float]:
    """Variances of the four local nullifiers of macronode t.

    Raises:
        LatticeRangeError: t, t + 1 or t + N outside the window.
        StateError: one of those macronodes has been measured.
    """
    period = state.lattice_period
    here = _require_macronode(state, t)
    partners = {"right": _require_macronode(state, t + 1), "down": _require_macronode(state, t + period)}
    m = state.modes
    values = []
    for quadrature, coeffs, partner, partner_coeffs in _NULLIFIER_COEFFS:
        offset = m if quadrature == "p" else 0
        row = np.zeros(2 * m)
        row[[slot + offset for slot in here]] += coeffs
        row[[slot + offset for slot in partners[partner]]] += partner_coeffs
        values.append(float(row @ state.cov @ row))
    return values


# ----------------------------
# Inputs
# ----------------------------
def _partner(pulse: PulseId, period: int) -> PulseId:
    if pulse.rail == "b":
        return PulseId(rail="a", t=pulse.t - 1)
    return PulseId(rail="c", t=pulse.t - period)


def inject_inputs(
    state: GaussianState, inputs: GaussianState, sites: Sequence[Tuple[int, Arm]]
) -> GaussianState:
    """Replace the distributed modes B_t / D_t at ``sites`` with the input modes.

    The replaced mode's two-mode-squeezed partner is reset to vacuum. Pairs in
    the distributed basis are mutually uncorrelated, so this is the same as
    rebuilding the network with the inputs in place of the squeezed vacua.

    Raises:
        ConfigurationError: repeated sites or a site count different from
            the number of input modes.
        LatticeRangeError / StateError: a site outside the window or already
            measured.
    """
    k = inputs.modes
    if len(sites) != k:
        raise ConfigurationError("need one site per input mode", inputs=k, sites=len(sites))
    if len(set(sites)) != len(sites):
        raise ConfigurationError("input sites collide", sites=[list(site) for site in sites])
    for t, arm in sites:
        if arm not in ("b", "d"):
            raise ConfigurationError(f"inputs enter on arm b or d, got {arm}", t=t)
        _require_macronode(state, t)

    dist = distributed_state(state)
    m = dist.modes
    targets = [dist.slot(PulseId(rail=arm, t=t)) for t, arm in sites]
    resets = []
    for t, arm in sites:
        partner = _partner(PulseId(rail=arm, t=t), state.lattice_period)
        if partner in dist.mode_table and partner.t not in dist.measured:
            resets.append(dist.slot(partner))

    cleared = targets + resets
    quads = cleared + [slot + m for slot in cleared]
    dist.cov[quads, :] = 0.0
    dist.cov[:, quads] = 0.0
    dist.mean[quads] = 0.0
    for slot in resets:
        dist.cov[slot, slot] = dist.cov[slot + m, slot + m] = 0.5

    idx = targets + [slot + m for slot in targets]
    dist.cov[np.ix_(idx, idx)] = inputs.cov
    dist.mean[idx] = inputs.mean

    logger.debug("Injected inputs", modes=k, sites=[list(site) for site in sites])
    return _macronode_basis_change(dist, foursplitter_matrix(), _complete_sites(dist))


def reference_input(modes: int, squeezing: Optional[float] = None) -> GaussianState:
    """Deterministic test input: mode j squeezed by squeezing*(j+1)/N and rotated by j*pi/(2N)."""
    squeezing = settings.INPUT_SQUEEZING if squeezing is None else squeezing
    S = np.eye(2 * modes)
    for j in range(modes):
        c, s = np.cos(j * np.pi / (2 * modes)), np.sin(j * np.pi / (2 * modes))
        r = squeezing * (j + 1) / modes
        block = np.array([[c, -s], [s, c]]) @ np.diag([np.exp(r), np.exp(-r)])
        idx = [j, j + modes]
        S[np.ix_(idx, idx)] = block
    return GaussianState(mean=np.zeros(2 * modes), cov=0.5 * S @ S.T)


# ----------------------------
# Measurement and feedforward
# ----------------------------
def _homodyne_rows(state: GaussianState, t: int, angles: MacronodeAngles) -> Tuple[List[int], np.ndarray]:
    """Slots of macronode t and the 4 x 2M matrix of its measured quadratures."""
    slots = _require_macronode(state, t)
    m = state.modes
    H = np.zeros((4, 2 * m))
    for row, (slot, theta) in enumerate(zip(slots, angles.as_list())):
        H[row, slot] = np.sin(theta)
        H[row, slot + m] = np.cos(theta)
    return slots, H


def _drop_macronode(
    state: GaussianState, t: int, slots: Sequence[int], mean: np.ndarray, cov: np.ndarray
) -> GaussianState:
    m = state.modes
    keep = [i for i in range(m) if i not in slots]
    quads = keep + [i + m for i in keep]
    cov = cov[np.ix_(quads, quads)]
    out = state.copy_state()
    out.mean = mean[quads]
    out.cov = (cov + cov.T) / 2
    out.mode_table = [state.mode_table[i] for i in keep]
    out.measured.add(t)
    return out


def measure_macronode(
    state: GaussianState, t: int, angles: MacronodeAngles, seed: int
) -> Tuple[GaussianState, List[HomodyneRecord]]:
    """Homodyne p(theta) = p cos(theta) + x sin(theta) on the four micronodes of t.

    Outcomes are sampled from the joint marginal; the remaining modes are
    conditioned with the Schur complement and the measured ones removed.
    """
    slots, H = _homodyne_rows(state, t, angles)
    sigma = H @ state.cov @ H.T
    sigma = (sigma + sigma.T) / 2
    floor = settings.VARIANCE_FLOOR
    low = np.diag(sigma) < floor
    if np.any(low):
        logger.warning("Homodyne variance floored", t=t, rails=[RAILS[i] for i in np.flatnonzero(low)])
        sigma[np.diag_indices(4)] = np.maximum(np.diag(sigma), floor)

    factor = cho_factor(sigma, lower=True)
    predicted = H @ state.mean
    z = np.random.default_rng(seed).standard_normal(4)
    outcomes = predicted + np.tril(factor[0]) @ z

    gain = cho_solve(factor, H @ state.cov).T
    mean = state.mean + gain @ (outcomes - predicted)
    cov = state.cov - gain @ H @ state.cov
    out = _drop_macronode(state, t, slots, mean, cov)

    records = [
        HomodyneRecord(pulse=PulseId(rail=rail, t=t), angle=float(theta), outcome=float(value))
        for rail, theta, value in zip(RAILS, angles.as_list(), outcomes)
    ]
    return out, records


def feedforward_targets(t: int, lattice_period: int) -> List[PulseId]:
    """Distributed modes receiving the outputs of macronode t: B_{t+1}, D_{t+N}."""
    return [PulseId(rail="b", t=t + 1), PulseId(rail="d", t=t + lattice_period)]


def feedforward_gain(state: GaussianState, targets: Sequence[PulseId], angles: MacronodeAngles) -> np.ndarray:
    """2M x 4 displacement per unit outcome, outcomes ordered (a, b, c, d).

    Each arm's output is shifted by ``-feedforward_matrix(pair) @ (m_1, m_2)``
    where m_1 is measured on the arm's first micronode (a or c). The two arm
    corrections are recombined onto the targets, which name distributed modes
    (rail b for B, rail d for D).
    """
    if len(targets) != 2:
        raise ConfigurationError("feedforward needs exactly two targets", targets=len(targets))
    arm_b = np.zeros((2, 4))
    arm_b[:, :2] = -feedforward_matrix(angles.arm_b)
    arm_d = np.zeros((2, 4))
    arm_d[:, 2:] = -feedforward_matrix(angles.arm_d)
    shifts = ((arm_b + arm_d) / np.sqrt(2), (arm_d - arm_b) / np.sqrt(2))

    m = state.modes
    gain = np.zeros((2 * m, 4))
    basis = foursplitter_matrix()
    for target, shift in zip(targets, shifts):
        slots = _require_macronode(state, target.t)
        weights = basis[:, _RAIL_INDEX[target.rail]]
        gain[slots] += np.outer(weights, shift[0])
        gain[[slot + m for slot in slots]] += np.outer(weights, shift[1])
    return gain


def apply_feedforward(
    state: GaussianState,
    records: Sequence[HomodyneRecord],
    targets: Sequence[PulseId],
    angles: MacronodeAngles,
) -> GaussianState:
    """Cancel the outcome-dependent displacement of both arms."""
    outcome = {record.pulse.rail: record.outcome for record in records}
    values = np.array([outcome[rail] for rail in RAILS])
    out = state.copy_state()
    out.mean = state.mean + feedforward_gain(state, targets, angles) @ values
    return out


def measure_averaged(
    state: GaussianState, t: int, angles: MacronodeAngles, targets: Sequence[PulseId]
) -> GaussianState:
    """Measurement of t plus feedforward, averaged over the outcomes.

    Displacing by ``gain @ outcomes`` after measuring H x is the linear map
    x -> (I + gain H) x on the joint state; macronode t is then discarded.
    """
    slots, H = _homodyne_rows(state, t, angles)
    T = np.eye(2 * state.modes) + feedforward_gain(state, targets, angles) @ H
    return _drop_macronode(state, t, slots, T @ state.mean, T @ state.cov @ T.T)


# ----------------------------
# Schedule execution
# ----------------------------
def _window(schedule: Schedule) -> Tuple[int, int]:
    sites = [instruction.site for instruction in schedule.instructions]
    period = schedule.lattice_period
    return min(sites) - period - 1, max(sites) + period + 1


def _instruction_seeds(seed: int, count: int) -> List[int]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def run_schedule(schedule: Schedule, inputs: GaussianState, r: float, seed: int) -> GaussianState:
    """Execute a schedule on a finite-squeezing lattice and return the output modes.

    The output mean follows the feedforward-corrected trajectory sampled with
    ``seed``; the output covariance is averaged over measurement outcomes, so
    it equals the ideal map applied to the input covariance plus lattice noise.

    Raises:
        ConfigurationError: input mode count differs from the schedule.
        StructuralError: an input wire bypasses the lattice or an output lands
            on a measured macronode.
    """
    n = schedule.modes
    if inputs.modes != n:
        raise ConfigurationError("input state has the wrong mode count", modes=inputs.modes, expected=n)
    if not schedule.instructions:
        return GaussianState(mean=inputs.mean.copy(), cov=inputs.cov.copy())

    graph = schedule_graph(schedule)
    by_site = {instruction.site: instruction for instruction in schedule.instructions}
    period = schedule.lattice_period

    consumer = {port.wire: (instruction.site, port.arm) for instruction in schedule.instructions for port in instruction.wires_in}
    sites = []
    for mode, wire in enumerate(schedule.input_wires):
        if wire not in consumer:
            raise StructuralError(f"input {mode} never enters the lattice", wire=wire)
        sites.append(consumer[wire])

    t_lo, t_hi = _window(schedule)
    state = inject_inputs(build_qrl(t_lo, t_hi, period, r), inputs, sites)

    order = list(nx.lexicographical_topological_sort(graph))
    seeds = _instruction_seeds(seed, len(order))
    averaged = state
    for site, instruction_seed in zip(order, seeds):
        angles = by_site[site].angles
        targets = feedforward_targets(site, period)
        averaged = measure_averaged(averaged, site, angles, targets)
        state, records = measure_macronode(state, site, angles, instruction_seed)
        state = apply_feedforward(state, records, targets, angles)

    landing: Dict[int, PulseId] = {}
    for instruction in schedule.instructions:
        for link in instruction.wires_out:
            if link.direction == "horizontal":
                landing[link.wire] = PulseId(rail="b", t=instruction.site + 1)
            else:
                landing[link.wire] = PulseId(rail="d", t=instruction.site + period)

    m = state.modes
    basis = foursplitter_matrix()
    L = np.zeros((2 * n, 2 * m))
    for mode, wire in enumerate(schedule.output_wires):
        pulse = landing[wire]
        if pulse.t in state.measured:
            raise StructuralError(f"output {mode} lands on measured macronode {pulse.t}", t=pulse.t)
        slots = _require_macronode(state, pulse.t)
        weights = basis[:, _RAIL_INDEX[pulse.rail]]
        L[mode, slots] = weights
        L[mode + n, [slot + m for slot in slots]] = weights

    cov = L @ averaged.cov @ L.T
    out = GaussianState(mean=L @ state.mean, cov=(cov + cov.T) / 2)
    logger.info("Ran schedule", modes=n, instructions=len(order), r=r, seed=seed)
    return out


def extract_linear_map(schedule: Schedule, r: float, seed: int) -> np.ndarray:
    """Linear part of the output-mean response at a fixed seed.

    With the seed fixed the output mean is affine in the input mean, so one
    run at zero mean and one per unit input quadrature give the map.
    """
    n = schedule.modes
    vacuum = GaussianState.vacuum(n)
    offset = run_schedule(schedule, vacuum, r, seed).mean
    M = np.zeros((2 * n, 2 * n))
    for i in range(2 * n):
        shifted = GaussianState.vacuum(n)
        shifted.mean[i] = 1.0
        M[:, i] = run_schedule(schedule, shifted, r, seed).mean - offset
    return M


def simulate_report(schedule: Schedule, r_db: float, seed: int) -> RunReport:
    """Run the reference input through the schedule and compare with the ideal map."""
    if r_db < 0:
        raise ConfigurationError("r_db must be >= 0", r_db=r_db)
    r = db_to_r(r_db)
    inputs = reference_input(schedule.modes)
    out = run_schedule(schedule, inputs, r, seed)
    S = verify_schedule(schedule).entries
    distance = float(np.linalg.norm(out.cov - S @ inputs.cov @ S.T, ord="fro"))

    period = schedule.lattice_period
    reference = build_qrl(0, period + 1, period, r)
    report = RunReport(
        r_db=float(r_db),
        seed=seed,
        output_mean=[float(v) for v in out.mean],
        output_cov=[[float(v) for v in row] for row in out.cov],
        target_distance_frobenius=distance,
        nullifier_variances=nullifier_variances(reference, 0),
    )
    logger.info("Simulated schedule", r_db=r_db, seed=seed, target_distance_frobenius=distance)
    return report
